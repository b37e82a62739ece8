#pragma once

// Free (Sullivan) commutative differential graded algebras built as towers
// of generator stages, minimal model construction up to a degree cap,
// lifting through surjective quasi-isomorphisms, linear parts of morphisms
// between free algebras, and formality certificates.
//
// Degree bookkeeping: building a model whose cohomology is certified through
// degree n requires H^k data for k <= n on both sides, hence target cap
// >= n+1; killer generators in degree k are introduced only while k+1 <= n,
// which is exactly what the certificate needs and keeps the stage tables
// independent of the cap.

#include <optional>
#include <string>
#include <vector>

#include "equimod/cdga.hpp"

namespace equimod {

struct SullivanGen {
  std::string name;
  int degree = 0;
};

// One tower level: the extension step that added a batch of generators.
struct SullivanStage {
  ExtendedCDGA ext;  // extension of the previous level's algebra
  int first_gen = 0; // index into SullivanAlgebra::gens of this stage's first
  int ngens = 0;
  // d of each stage generator in the PRE-extension coordinates (degree
  // gens[first_gen+i].degree + 1; an empty matrix means zero).
  std::vector<Mat> dgen_base;
};

struct SullivanAlgebra {
  int cap = 0;
  TruncatedCDGA alg;  // realized free algebra over all stages
  std::vector<SullivanGen> gens;
  std::vector<int> gen_pos;  // basis index of gens[i] in its degree
  std::vector<Mat> dgen;     // d of gens[i] in current alg coordinates
  std::vector<SullivanStage> stages;

  std::vector<int> gens_in_degree(int k) const;
  int gen_by_name(const std::string& name) const;  // -1 if unknown
};

// The free algebra on no generators (the rationals through cap).
SullivanAlgebra free_sullivan(int cap);

// Adds one batch of generators.  dgen_base[i] is the differential of
// new_gens[i] as a coordinate vector of degree new_gens[i].degree + 1 in the
// CURRENT m.alg (so it can only involve earlier generators); an empty matrix
// means zero.  Every nonzero dgen_base[i] must be a cocycle.  Generator
// degrees must be >= 2 and names fresh.
void add_stage(SullivanAlgebra& m, const std::vector<GenSpec>& new_gens,
               const std::vector<Mat>& dgen_base);

// Structural self-check (algebra axioms, d matches the stored generator
// differentials, cocycle conditions); first violation or nullopt.
std::optional<std::string> check_sullivan(const SullivanAlgebra& m);

// Minimality = every d(generator) is decomposable: in the monomial basis the
// degree-(k+1) component splits as generators (+) products, so the check is
// that d(gen) has no coordinate on any generator position.
std::optional<std::string> check_minimality(const SullivanAlgebra& m);
bool is_minimal(const SullivanAlgebra& m);

// Multiplicative extension of generator images to the whole free algebra:
// gen_images[i] is a tgt coordinate vector of degree gens[i].degree.
// Requires tgt.cap >= m.cap.  The result is a CDGA morphism whenever the
// images are compatible with the differentials; no check is performed here.
std::vector<Mat> sullivan_evaluate(const SullivanAlgebra& m,
                                   const TruncatedCDGA& tgt,
                                   const std::vector<Mat>& gen_images);

struct ModelMap {
  std::vector<Mat> rho;        // realized morphism m.alg -> target
  int quasi_iso_through = 0;   // H^k(rho) verified an iso for k <= this
};

struct MinimalModel {
  SullivanAlgebra m;
  ModelMap rho;
};

// Minimal Sullivan model of a through degree n: stages k = 2..n add
// coker H^k(rho) generators (d = 0, mapped to chosen representing cocycles)
// and, while k+1 <= n, ker H^{k+1}(rho) killers (d = the representing
// cocycle, mapped to a chosen primitive).  Requires a cohomologically
// 1-connected and a.cap >= n+1; H^k(rho) is verified an isomorphism for
// every k <= n before returning.
MinimalModel minimal_model(const TruncatedCDGA& a, int n);

// Lift of f : m.alg -> a through a degreewise-surjective quasi-iso
// rho : u -> a; returns g with rho.g = f exactly.  Requires m minimal and
// all caps equal.  Throws "lift obstruction at degree k" when a generator's
// constraint system has no solution (signals that rho is not a surjective
// quasi-isomorphism).
std::vector<Mat> lift(const SullivanAlgebra& m, const TruncatedCDGA& a,
                      const std::vector<Mat>& f, const TruncatedCDGA& u,
                      const std::vector<Mat>& rho);

struct LinearPart {
  std::vector<Mat> maps;         // per degree: (#tgt gens) x (#src gens)
  std::vector<char> surjective;  // per degree
  bool all_surjective = true;
};

// pi_W . phi |_V : generator-coordinate block of a morphism between free
// algebras, with a degreewise surjectivity report.
LinearPart linear_part(const SullivanAlgebra& src, const SullivanAlgebra& tgt,
                       const std::vector<Mat>& phi);

struct FormalityCertificate {
  SullivanAlgebra model;    // minimal model of the cohomology algebra
  std::vector<Mat> psi;     // model.alg -> a with H(psi) iso through `through`
  int through = 0;
};

// Semi-decision for formality: builds the minimal model of H(a) and attempts
// a quasi-isomorphism into a by greedy representative choice (killer images
// found by linear solves).  Success is a certificate; nullopt is
// inconclusive, never a disproof.  Requires a 1-connected and a.cap >= n+2
// (one degree for passing to cohomology, one for the certificate check).
std::optional<FormalityCertificate> formality_certificate(
    const TruncatedCDGA& a, int n);

}  // namespace equimod
