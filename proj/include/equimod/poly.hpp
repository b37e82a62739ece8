#pragma once

// Free graded-commutative monomial bases and the polynomial-string parser.
//
// Variable order: exterior (odd-degree) generators first in declaration
// order, then polynomial (even-degree) generators in declaration order.
// Within a degree, monomials are sorted by descending lexicographic order on
// exponent vectors (graded-lex), giving canonical, report-stable bases.
// Koszul normalization is performed when parsing, so "y1*x1" and "-x1*y1"
// (odd degrees) denote the same element.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equimod/mat.hpp"

namespace equimod {

struct GenSpec {
  std::string name;
  int degree = 0;
  bool operator==(const GenSpec& o) const {
    return name == o.name && degree == o.degree;
  }
};

// Exponent vector over ordered variables (position = place in var order).
using Expo = std::vector<int>;

struct FreeBasis {
  std::vector<GenSpec> gens;          // declaration order
  std::vector<int> order;             // order[pos] = declaration index
  std::vector<int> pos_degree;        // degree of variable at each position
  int cap = 0;
  std::vector<std::vector<Expo>> monos;        // per degree, canonical order
  std::vector<std::map<Expo, int>> mono_index;  // per degree

  FreeBasis() = default;
  FreeBasis(std::vector<GenSpec> gens_, int cap_);

  int nvars() const { return static_cast<int>(order.size()); }
  int dim(int k) const {
    return (k >= 0 && k <= cap) ? static_cast<int>(monos[k].size()) : 0;
  }
  int degree_of(const Expo& e) const;
  int index_of(int degree, const Expo& e) const;  // -1 if absent

  // Position of a generator (declaration index) in the variable order.
  int pos_of_gen(int decl_index) const;
  // Declaration index by name; -1 if unknown.
  int gen_by_name(const std::string& name) const;

  // Product of two monomials: sign and exponent vector, or nullopt when an
  // exterior variable squares to zero.  Degree may exceed cap; caller checks.
  std::optional<std::pair<int, Expo>> mono_mul(const Expo& a, const Expo& b) const;

  std::string mono_str(const Expo& e) const;

  // d of a monomial by the Leibniz rule, given per-variable images of d as
  // free-coordinate vectors (dgen[pos] has degree pos_degree[pos]+1; empty
  // matrix means zero).  Result: free coords in degree deg(e)+1; requires
  // deg(e)+1 <= cap.
  Mat mono_d(const Expo& e, const std::vector<Mat>& dgen) const;
};

// One parsed homogeneous component bundle: degree -> free-coordinate vector.
using PolyByDegree = std::map<int, Mat>;

// Parses a polynomial string over fb's generators with rational coefficients.
// Terms are '+'/'-' separated; a term is an optional coefficient ("a" or
// "a/b") and '*'-separated factors "name" or "name^k".  "0" or "" is zero;
// "1" the unit.  Throws std::invalid_argument with a descriptive message on
// syntax errors, unknown generators, or degree overflow past fb.cap.
PolyByDegree poly_parse(const FreeBasis& fb, const std::string& text);

// Single homogeneous polynomial of the given degree (zero vector allowed).
// Throws if the string has components in any other degree.
Mat poly_parse_homogeneous(const FreeBasis& fb, const std::string& text, int degree);

// Rendering of a free-coordinate vector as a polynomial string.
std::string poly_str(const FreeBasis& fb, int degree, const Mat& v);

}  // namespace equimod
