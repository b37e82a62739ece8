#include "equimod/orbit.hpp"

#include <stdexcept>

namespace equimod {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string arrow_name(const Arrow& a) {
  return level_name(a.first) + "->" + level_name(a.second);
}

}  // namespace

std::string level_name(Level l) {
  switch (l) {
    case Level::E: return "e";
    case Level::P: return "P";
    case Level::Q: return "Q";
    case Level::G: return "G";
  }
  return "?";
}

std::optional<Level> level_by_name(const std::string& s) {
  if (s == "e" || s == "E") return Level::E;
  if (s == "P" || s == "p") return Level::P;
  if (s == "Q" || s == "q") return Level::Q;
  if (s == "G" || s == "g") return Level::G;
  return std::nullopt;
}

std::vector<Level> GroupSpec::levels() const {
  if (is_pq()) return {Level::E, Level::P, Level::Q, Level::G};
  return {Level::E, Level::G};
}

std::vector<std::pair<Level, Level>> GroupSpec::arrows() const {
  if (is_pq())
    return {{Level::E, Level::P},
            {Level::E, Level::Q},
            {Level::P, Level::G},
            {Level::Q, Level::G}};
  return {{Level::E, Level::G}};
}

bool GroupSpec::leq(Level a, Level b) const {
  if (a == b) return true;
  if (a == Level::E) return true;
  if (b == Level::G) return true;
  return false;
}

Mat DiagramOfGVS::map_along(Level src, Level dst, int k) const {
  if (src == dst) return Mat::identity(dim(src, k));
  auto it = maps.find({src, dst});
  if (it != maps.end()) return it->second[k];
  if (group.is_pq() && src == Level::E && dst == Level::G)
    return maps.at({Level::P, Level::G})[k] * maps.at({Level::E, Level::P})[k];
  throw std::invalid_argument("map_along: " + level_name(src) +
                              " is not below " + level_name(dst));
}

std::optional<std::string> validate_diagram(const DiagramOfGVS& x) {
  if (!is_prime(x.group.p)) return "p is not prime";
  if (x.group.q != 0) {
    if (!is_prime(x.group.q)) return "q is not prime";
    if (x.group.q == x.group.p) return "p and q must be distinct";
  }
  if (x.cap < 0) return "negative cap";
  auto lv = x.group.levels();
  if (x.spaces.size() != lv.size()) return "level set mismatch";
  for (Level l : lv) {
    auto it = x.spaces.find(l);
    if (it == x.spaces.end()) return "missing level " + level_name(l);
    if (it->second.cap != x.cap)
      return "cap mismatch at level " + level_name(l);
    for (int k = 0; k <= x.cap; ++k)
      if (it->second.dim(k) < 0)
        return "negative dimension at level " + level_name(l);
  }
  auto ar = x.group.arrows();
  if (x.maps.size() != ar.size()) return "arrow set mismatch";
  for (const Arrow& a : ar) {
    auto it = x.maps.find(a);
    if (it == x.maps.end()) return "missing map " + arrow_name(a);
    if (static_cast<int>(it->second.size()) != x.cap + 1)
      return "degree count mismatch on " + arrow_name(a);
    for (int k = 0; k <= x.cap; ++k) {
      const Mat& m = it->second[k];
      if (m.rows != x.dim(a.second, k) || m.cols != x.dim(a.first, k))
        return "shape mismatch on " + arrow_name(a) + " in degree " +
               std::to_string(k);
    }
  }
  if (x.group.is_pq()) {
    for (int k = 0; k <= x.cap; ++k) {
      Mat lhs = x.maps.at({Level::P, Level::G})[k] *
                x.maps.at({Level::E, Level::P})[k];
      Mat rhs = x.maps.at({Level::Q, Level::G})[k] *
                x.maps.at({Level::E, Level::Q})[k];
      if (!(lhs == rhs))
        return "square does not commute in degree " + std::to_string(k);
    }
  }
  return std::nullopt;
}

std::optional<std::string> validate_diagram_map(const DiagramOfGVS& src,
                                                const DiagramOfGVS& dst,
                                                const LevelMaps& f) {
  if (!(src.group == dst.group)) return "group mismatch";
  if (src.cap != dst.cap) return "cap mismatch";
  for (Level l : src.group.levels()) {
    auto it = f.find(l);
    if (it == f.end()) return "missing component at level " + level_name(l);
    if (static_cast<int>(it->second.size()) != src.cap + 1)
      return "degree count mismatch at level " + level_name(l);
    for (int k = 0; k <= src.cap; ++k)
      if (it->second[k].rows != dst.dim(l, k) ||
          it->second[k].cols != src.dim(l, k))
        return "shape mismatch at level " + level_name(l) + " degree " +
               std::to_string(k);
  }
  for (const Arrow& a : src.group.arrows())
    for (int k = 0; k <= src.cap; ++k) {
      Mat lhs = f.at(a.second)[k] * src.maps.at(a)[k];
      Mat rhs = dst.maps.at(a)[k] * f.at(a.first)[k];
      if (!(lhs == rhs))
        return "naturality fails on " + arrow_name(a) + " in degree " +
               std::to_string(k);
    }
  return std::nullopt;
}

LevelMaps zero_map(const DiagramOfGVS& src, const DiagramOfGVS& dst) {
  LevelMaps f;
  for (Level l : src.group.levels()) {
    GradedMap g(src.cap + 1);
    for (int k = 0; k <= src.cap; ++k) g[k] = Mat(dst.dim(l, k), src.dim(l, k));
    f[l] = std::move(g);
  }
  return f;
}

LevelMaps identity_map(const DiagramOfGVS& x) {
  LevelMaps f;
  for (Level l : x.group.levels()) {
    GradedMap g(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) g[k] = Mat::identity(x.dim(l, k));
    f[l] = std::move(g);
  }
  return f;
}

LevelMaps compose_maps(const DiagramOfGVS& src, const DiagramOfGVS& mid,
                       const DiagramOfGVS& dst, const LevelMaps& outer,
                       const LevelMaps& inner) {
  (void)mid;
  (void)dst;
  LevelMaps f;
  for (Level l : src.group.levels()) {
    GradedMap g(src.cap + 1);
    for (int k = 0; k <= src.cap; ++k) g[k] = outer.at(l)[k] * inner.at(l)[k];
    f[l] = std::move(g);
  }
  return f;
}

bool maps_equal(const LevelMaps& a, const LevelMaps& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [l, g] : a) {
    auto it = b.find(l);
    if (it == b.end() || it->second.size() != g.size()) return false;
    for (size_t k = 0; k < g.size(); ++k)
      if (!(g[k] == it->second[k])) return false;
  }
  return true;
}

bool map_is_zero(const LevelMaps& f) {
  for (const auto& [l, g] : f)
    for (const Mat& m : g)
      if (!m.is_zero()) return false;
  return true;
}

bool map_is_mono(const DiagramOfGVS& src, const LevelMaps& f) {
  for (Level l : src.group.levels())
    for (int k = 0; k <= src.cap; ++k)
      if (rank(f.at(l)[k]) != src.dim(l, k)) return false;
  return true;
}

bool map_is_epi(const DiagramOfGVS& dst, const LevelMaps& f) {
  for (Level l : dst.group.levels())
    for (int k = 0; k <= dst.cap; ++k)
      if (rank(f.at(l)[k]) != dst.dim(l, k)) return false;
  return true;
}

// ----------------------------------------------------------- corners

CornerData corner_kernels(const DiagramOfGVS& x) {
  CornerData c;
  for (Level l : x.group.levels()) {
    std::vector<Subspace> per(x.cap + 1);
    GVS g;
    g.cap = x.cap;
    g.dims.resize(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) {
      if (l == Level::G) {
        per[k] = span_of(Mat::identity(x.dim(Level::G, k)));
      } else if (l == Level::P || l == Level::Q) {
        per[k] = kernel(x.maps.at({l, Level::G})[k]);
      } else if (x.group.is_pq()) {
        per[k] = intersect(kernel(x.maps.at({Level::E, Level::P})[k]),
                           kernel(x.maps.at({Level::E, Level::Q})[k]));
      } else {
        per[k] = kernel(x.maps.at({Level::E, Level::G})[k]);
      }
      g.dims[k] = per[k].dim();
    }
    c.corner[l] = std::move(per);
    c.dims[l] = std::move(g);
  }
  return c;
}

// ----------------------------------------------------------- kernels etc.

SubDiagram diagram_kernel(const DiagramOfGVS& src, const DiagramOfGVS& dst,
                          const LevelMaps& f) {
  SubDiagram out;
  out.dia.group = src.group;
  out.dia.cap = src.cap;
  std::map<Level, std::vector<Subspace>> ker;
  for (Level l : src.group.levels()) {
    std::vector<Subspace> per(src.cap + 1);
    GVS g;
    g.cap = src.cap;
    g.dims.resize(src.cap + 1);
    GradedMap inc(src.cap + 1);
    for (int k = 0; k <= src.cap; ++k) {
      per[k] = kernel(f.at(l)[k]);
      g.dims[k] = per[k].dim();
      inc[k] = per[k].basis;
    }
    ker[l] = std::move(per);
    out.dia.spaces[l] = std::move(g);
    out.incl[l] = std::move(inc);
  }
  for (const Arrow& a : src.group.arrows()) {
    GradedMap g(src.cap + 1);
    for (int k = 0; k <= src.cap; ++k) {
      Mat pushed = src.maps.at(a)[k] * ker[a.first][k].basis;
      auto sol = solve(ker[a.second][k].basis, pushed);
      if (!sol)
        throw std::runtime_error(
            "diagram_kernel: structure map does not preserve the kernel");
      g[k] = *sol;
    }
    out.dia.maps[a] = std::move(g);
  }
  return out;
}

QuotientDiagram diagram_cokernel(const DiagramOfGVS& src,
                                 const DiagramOfGVS& dst, const LevelMaps& f) {
  (void)src;
  QuotientDiagram out;
  out.dia.group = dst.group;
  out.dia.cap = dst.cap;
  std::map<Level, GradedMap> lift;  // right inverse of proj per level
  for (Level l : dst.group.levels()) {
    GVS g;
    g.cap = dst.cap;
    g.dims.resize(dst.cap + 1);
    GradedMap pr(dst.cap + 1), lf(dst.cap + 1);
    for (int k = 0; k <= dst.cap; ++k) {
      QuotientMap qm = quotient_map(dst.dim(l, k), image(f.at(l)[k]));
      g.dims[k] = qm.coker_dim;
      auto sec = solve(qm.q, Mat::identity(qm.coker_dim));
      if (!sec) throw std::runtime_error("diagram_cokernel: no section");
      pr[k] = std::move(qm.q);
      lf[k] = std::move(*sec);
    }
    out.dia.spaces[l] = std::move(g);
    out.proj[l] = std::move(pr);
    lift[l] = std::move(lf);
  }
  for (const Arrow& a : dst.group.arrows()) {
    GradedMap g(dst.cap + 1);
    for (int k = 0; k <= dst.cap; ++k)
      g[k] = out.proj.at(a.second)[k] * dst.maps.at(a)[k] * lift.at(a.first)[k];
    out.dia.maps[a] = std::move(g);
  }
  return out;
}

// ----------------------------------------------------------- restriction

DiagramOfGVS restrict_to_subgroup(const DiagramOfGVS& x, Level which,
                                  RestrictMode mode) {
  if (!x.group.is_pq())
    throw std::invalid_argument(
        "restrict_to_subgroup: diagram already has prime order");
  if (which != Level::P && which != Level::Q)
    throw std::invalid_argument("restrict_to_subgroup: pick level P or Q");
  Level other = (which == Level::P) ? Level::Q : Level::P;
  DiagramOfGVS out;
  out.group.p = (which == Level::P) ? x.group.p : x.group.q;
  out.group.q = 0;
  out.cap = x.cap;
  Level lo = (mode == RestrictMode::Ambient) ? Level::E : other;
  Level hi = (mode == RestrictMode::Ambient) ? which : Level::G;
  out.spaces[Level::E] = x.space(lo);
  out.spaces[Level::G] = x.space(hi);
  out.maps[{Level::E, Level::G}] = x.maps.at({lo, hi});
  return out;
}

}  // namespace equimod
