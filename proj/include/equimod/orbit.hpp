#pragma once

// Diagrams of graded vector spaces over the orbit-category poset of a cyclic
// group of order p or pq (p, q distinct primes).
//
// Levels are the subgroups that matter: e, and for order pq the two proper
// subgroups P and Q, and the full group G.  Structure maps run along subgroup
// inclusion, e -> P -> G and e -> Q -> G (for prime order just e -> G), and
// the square P/Q must commute.  Injectivity of such a diagram is decided
// through the corner-kernel envelope, which this header also exposes.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equimod/gvs.hpp"
#include "equimod/mat.hpp"
#include "equimod/subspace.hpp"

namespace equimod {

enum class Level : int { E = 0, P = 1, Q = 2, G = 3 };

std::string level_name(Level l);
std::optional<Level> level_by_name(const std::string& s);

struct GroupSpec {
  long p = 2;
  long q = 0;  // 0: cyclic of prime order p

  bool is_pq() const { return q != 0; }
  std::vector<Level> levels() const;
  std::vector<std::pair<Level, Level>> arrows() const;
  // Subgroup containment between levels (E below everything, G on top).
  bool leq(Level a, Level b) const;
  bool operator==(const GroupSpec& o) const { return p == o.p && q == o.q; }
};

using Arrow = std::pair<Level, Level>;
using GradedMap = std::vector<Mat>;           // one matrix per degree 0..cap
using LevelMaps = std::map<Level, GradedMap>; // a diagram map, levelwise

struct DiagramOfGVS {
  GroupSpec group;
  int cap = 0;
  std::map<Level, GVS> spaces;
  std::map<Arrow, GradedMap> maps;  // generating arrows only

  const GVS& space(Level l) const { return spaces.at(l); }
  int dim(Level l, int k) const { return spaces.at(l).dim(k); }
  // Composite structure map along the poset; identity when src == dst.
  // Throws when src is not below dst.
  Mat map_along(Level src, Level dst, int k) const;
};

// First structural defect (missing level, shape mismatch, non-commuting
// square), or nullopt when the diagram is well formed.
std::optional<std::string> validate_diagram(const DiagramOfGVS& x);

std::optional<std::string> validate_diagram_map(const DiagramOfGVS& src,
                                                const DiagramOfGVS& dst,
                                                const LevelMaps& f);

LevelMaps zero_map(const DiagramOfGVS& src, const DiagramOfGVS& dst);
LevelMaps identity_map(const DiagramOfGVS& x);
LevelMaps compose_maps(const DiagramOfGVS& src, const DiagramOfGVS& mid,
                       const DiagramOfGVS& dst, const LevelMaps& outer,
                       const LevelMaps& inner);
bool maps_equal(const LevelMaps& a, const LevelMaps& b);
bool map_is_zero(const LevelMaps& f);
// Levelwise injectivity / surjectivity of a diagram map.
bool map_is_mono(const DiagramOfGVS& src, const LevelMaps& f);
bool map_is_epi(const DiagramOfGVS& dst, const LevelMaps& f);

// ----------------------------------------------------------- corners

// Corner subspaces: V_G is all of X(G); V_P = ker(P -> G);
// V_Q = ker(Q -> G); V_e = ker(e -> P) cap ker(e -> Q) (prime order:
// V_e = ker(e -> G)).
struct CornerData {
  std::map<Level, std::vector<Subspace>> corner;  // per level, per degree
  std::map<Level, GVS> dims;
};
CornerData corner_kernels(const DiagramOfGVS& x);

// ----------------------------------------------------------- envelope

// The injective envelope: env(L) = (+)_{H >= L} V_H with block projections
// as structure maps, and the canonical embedding phi.
struct EnvelopeResult {
  DiagramOfGVS env;
  LevelMaps embed;    // phi_L : X(L) -> env(L), always levelwise injective
  CornerData corners;

  // Offset of block H inside env(L) in degree k (blocks ordered G, P, Q, E).
  int block_offset(Level at, Level block, int k) const;
};
EnvelopeResult envelope(const DiagramOfGVS& x);

struct InjectivityReport {
  bool injective = false;
  std::map<Level, GVS> x_dims;
  std::map<Level, GVS> env_dims;
};
InjectivityReport is_injective(const DiagramOfGVS& x);

// ----------------------------------------------------------- property I

// For order pq: P -> G and Q -> G surjective, and e surjects onto the fiber
// product K of X(P) -> X(G) <- X(Q).  For prime order the fiber product
// degenerates to X(G) and all three conditions read e/G surjectivity.
struct PropertyIReport {
  bool surj_pg = false;
  bool surj_qg = false;
  bool surj_to_k = false;
  std::vector<int> pullback_dims;  // dim K per degree
  bool satisfied = false;
};
PropertyIReport property_I(const DiagramOfGVS& x);

// ----------------------------------------------------------- resolution

struct Resolution {
  std::vector<EnvelopeResult> terms;  // I_0 .. I_{len-1}
  std::vector<LevelMaps> d;           // d_i : I_i -> I_{i+1}
  LevelMaps aug;                      // X -> I_0
  int length() const { return static_cast<int>(terms.size()); }
};

// Minimal injective resolution by iterated envelopes of cokernels; throws
// std::runtime_error("resolution did not terminate") past 8 terms (the
// theory caps the length at 2 resp. 3).
Resolution min_injective_resolution(const DiagramOfGVS& x);

// ----------------------------------------------------------- extension

// h with h.j = f, where j : A -> B is levelwise injective and X is
// injective.  Computed blockwise through the envelope identification of X,
// so it is total exactly on injective targets; throws std::invalid_argument
// otherwise.
LevelMaps extend_along_mono(const DiagramOfGVS& a, const DiagramOfGVS& b,
                            const LevelMaps& j, const DiagramOfGVS& x,
                            const LevelMaps& f);

// Extension solvability by brute linear algebra (naturality plus h.j = f as
// one linear system per degree).  Independent of the envelope machinery; the
// lifting oracle and the property suites cross-check against it.
bool extension_exists(const DiagramOfGVS& a, const DiagramOfGVS& b,
                      const LevelMaps& j, const DiagramOfGVS& x,
                      const LevelMaps& f, int* fail_degree = nullptr);

// ----------------------------------------------------------- kernels etc.

struct SubDiagram {
  DiagramOfGVS dia;
  LevelMaps incl;
};
// Levelwise kernel of f : src -> dst with the restricted structure maps.
SubDiagram diagram_kernel(const DiagramOfGVS& src, const DiagramOfGVS& dst,
                          const LevelMaps& f);

struct QuotientDiagram {
  DiagramOfGVS dia;
  LevelMaps proj;
};
// Levelwise cokernel of f : src -> dst with the induced structure maps.
QuotientDiagram diagram_cokernel(const DiagramOfGVS& src,
                                 const DiagramOfGVS& dst, const LevelMaps& f);

// ----------------------------------------------------------- oracle

struct OracleBudget {
  int max_dim = 4;
  int trials = 50;
  unsigned long long seed = 0;
};

struct OracleCounterexample {
  std::string family;  // which test family produced it
  int degree = -1;     // degree at which the extension fails
  std::string detail;
};

struct OracleReport {
  bool injective_consistent = true;
  int tests_run = 0;
  std::optional<OracleCounterexample> counterexample;
};

// Searches for an extension problem j : A -> B, f : A -> X with no solution.
// A counterexample certifies non-injectivity; consistency across the curated
// families plus the seeded random monos is evidence for injectivity.
OracleReport lifting_oracle(const DiagramOfGVS& x, const OracleBudget& budget);

// ----------------------------------------------------------- restriction

enum class RestrictMode { Ambient, Fixed };

// Prime-order diagram obtained from an order-pq diagram: `which` names the
// surviving level (P or Q).  Ambient: the underlying space as a C_which
// object, (e: X(e) -> G: X(which)).  Fixed: the fixed points of the other
// subgroup, (e: X(other) -> G: X(G)).
DiagramOfGVS restrict_to_subgroup(const DiagramOfGVS& x, Level which,
                                  RestrictMode mode);

}  // namespace equimod
