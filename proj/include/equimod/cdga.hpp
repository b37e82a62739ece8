#pragma once

// Truncated commutative differential graded algebras over Q.
//
// A TruncatedCDGA stores degreewise bases through a degree cap, bilinear
// multiplication tables for every degree pair that fits under the cap, and a
// degree +1 differential.  The truncation contract: any claim about degree k
// requires cap >= k+1 (Leibniz and d-closure at k inspect k+1); degree-cap
// data is a boundary layer, not trustworthy for cohomology.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equimod/mat.hpp"
#include "equimod/poly.hpp"
#include "equimod/subspace.hpp"

namespace equimod {

struct TruncatedCDGA {
  int cap = 0;
  std::vector<int> dims;                        // size cap+1
  std::vector<std::vector<std::string>> names;  // basis labels per degree
  // mult[i][j]: dims[i+j] x (dims[i]*dims[j]); column a*dims[j]+b is the
  // product of basis elements a (degree i) and b (degree j).  i+j <= cap.
  std::vector<std::vector<Mat>> mult;
  std::vector<Mat> diff;  // diff[k]: dims[k+1] x dims[k], for k = 0..cap-1
  int unit = 0;           // basis index in degree 0

  int dim(int k) const { return (k >= 0 && k <= cap) ? dims[k] : 0; }
  Mat unit_vec() const;

  // Product of coordinate vectors x (degree i) and y (degree j); i+j <= cap.
  Mat mul(int i, const Mat& x, int j, const Mat& y) const;
  // Differential of a degree-k vector; requires k < cap.
  Mat d(int k, const Mat& x) const;

  // The base field concentrated in degree 0.
  static TruncatedCDGA rationals(int cap);
};

// First violated algebra invariant (unit, graded commutativity,
// associativity, d^2 = 0, Leibniz), or nullopt when all hold.
std::optional<std::string> check_algebra(const TruncatedCDGA& a);

// ----------------------------------------------------------- presentations

struct Presentation {
  std::vector<GenSpec> gens;
  std::vector<std::string> relations;               // homogeneous polynomials
  std::map<std::string, std::string> differential;  // generator -> polynomial
  int cap = 0;
};

// A realized presentation: normal-form monomial bases modulo the relation
// ideal, with enough bookkeeping to build morphisms from generator images.
struct PresentedCDGA {
  TruncatedCDGA alg;
  FreeBasis fb;
  std::vector<RrefResult> ideal;            // per degree, RREF of ideal span
  std::vector<std::vector<int>> quot_monos; // free-monomial indices kept
  std::vector<Mat> dgen_free;               // d images per var position, free coords
  std::vector<std::pair<int, Mat>> rel_free;  // (degree, free coords) per relation

  // Free coordinates -> quotient coordinates (normal form).
  Mat reduce(int degree, const Mat& free_vec) const;
  // Quotient coordinates -> free coordinates of the canonical representative.
  Mat unreduce(int degree, const Mat& quot_vec) const;
};

// Realizes a presentation; throws std::invalid_argument on inhomogeneous
// relations, a differential incompatible with the relations, or bad degrees.
PresentedCDGA realize(const Presentation& p);

// Morphism matrices from generator images (images[i] is a target coordinate
// vector of degree gens[i].degree).  Verifies that every relation maps to
// zero; throws otherwise.  d-compatibility is not checked here.
std::vector<Mat> morphism_from_gen_images(const PresentedCDGA& src,
                                          const TruncatedCDGA& tgt,
                                          const std::vector<Mat>& images);

// ----------------------------------------------------------- morphisms

// maps[k]: tgt.dims[k] x src.dims[k] for k = 0..src.cap.  The target may
// have a larger cap (morphisms out of a lower truncation); all axioms are
// checked through the source cap.
std::optional<std::string> check_morphism(const TruncatedCDGA& src,
                                          const TruncatedCDGA& tgt,
                                          const std::vector<Mat>& maps);

std::vector<Mat> compose(const std::vector<Mat>& outer,
                         const std::vector<Mat>& inner);
std::vector<Mat> identity_morphism(const TruncatedCDGA& a);

struct RetractionWitness {
  std::vector<Mat> r;
  std::vector<Mat> i;
};

// Witness iff r.i = id degreewise and both are valid morphisms; throws with
// the first failing degree otherwise.
RetractionWitness verify_retraction(const TruncatedCDGA& big,
                                    const TruncatedCDGA& small,
                                    const std::vector<Mat>& r,
                                    const std::vector<Mat>& i);

// ----------------------------------------------------------- cohomology

struct Cohomology {
  int through = 0;           // trustworthy degrees: 0..through (= cap-1)
  std::vector<int> dims;     // size through+1
  std::vector<Mat> reps;     // reps[k]: a.dims[k] x dims[k], cocycle columns
  std::vector<Mat> bnd;      // bnd[k]: boundary-space basis columns
  std::vector<Mat> cyc;      // cyc[k]: cocycle-space basis columns

  // Class coordinates of cocycle columns (throws if not a cocycle).
  Mat class_of(int k, const Mat& z) const;
};

Cohomology cohomology(const TruncatedCDGA& a);

// H as a zero-differential algebra with cap = a.cap - 1.
TruncatedCDGA cohomology_algebra(const TruncatedCDGA& a, const Cohomology& h);

// Induced map on cohomology in one degree (k <= both.through).
Mat induced_on_h(const std::vector<Mat>& f, const Cohomology& src_h,
                 const Cohomology& tgt_h, int k);

bool is_one_connected(const TruncatedCDGA& a);

// ----------------------------------------------------------- wedge/pullback

struct WedgeResult {
  TruncatedCDGA alg;  // degree 0 = Q; degree k>0 = a_k (+) b_k; cross = 0
  // Block helpers per degree: inclusion/projection matrices.
  std::vector<Mat> incl_a, incl_b, proj_a, proj_b;
};

WedgeResult wedge(const TruncatedCDGA& a, const TruncatedCDGA& b);

// The morphism wedge(f, g): wedge(a, b) -> wedge(c, e), blockwise.
std::vector<Mat> wedge_morphism(const WedgeResult& src, const WedgeResult& tgt,
                                const std::vector<Mat>& f,
                                const std::vector<Mat>& g);

struct PullbackResult {
  TruncatedCDGA alg;       // K_n = {(a,b) : f(a) = g(b)}
  std::vector<Mat> basis;  // per degree: (a_n + b_n) x K_n, stacked columns
  std::vector<Mat> pi1, pi2;
};

PullbackResult pullback(const TruncatedCDGA& a, const TruncatedCDGA& b,
                        const TruncatedCDGA& c, const std::vector<Mat>& f,
                        const std::vector<Mat>& g);

// Mediating morphism: tau with pi1.tau = h, pi2.tau = e (h: D -> a,
// e: D -> b, f.h = g.e required; throws otherwise).
std::vector<Mat> mediate(const PullbackResult& pb, const TruncatedCDGA& dsrc,
                         const std::vector<Mat>& h, const std::vector<Mat>& e);

// ----------------------------------------------------------- extensions

// base (X) free graded-commutative algebra on new generators, built in two
// phases so differential assignments can be written in the extended
// coordinates: first the shell (bases, multiplication, inclusion), then the
// differential from per-generator assignments.
struct ExtendedCDGA {
  TruncatedCDGA alg;
  std::vector<int> base_dims;
  std::vector<Mat> base_diff;  // copy of the base differential
  FreeBasis genb;          // free basis on the new generators
  std::vector<Mat> incl;   // base -> extended, per degree
  // Layout in degree k: blocks by generator-monomial degree m ascending
  // (m = 0 is the base block), then monomial index, then base index.
  int pair_index(int k, int mono_deg, int mono_idx, int base_idx) const;
  // Basis index of generator decl_index (times base unit) in its degree.
  int gen_index(int decl_index) const;
};

ExtendedCDGA extend_algebra_shell(const TruncatedCDGA& base,
                                  const std::vector<GenSpec>& new_gens);

// dgen[i]: extended-coordinate vector of degree new_gens[i].degree + 1 (an
// empty 0x0 matrix means zero).  Recomputes all diff tables by Leibniz.
void set_extension_differential(ExtendedCDGA& ext,
                                const std::vector<Mat>& dgen);

}  // namespace equimod
