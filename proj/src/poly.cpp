#include "equimod/poly.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace equimod {

namespace {

void enumerate_rec(const FreeBasis& fb, int pos, int degree_left, Expo& cur,
                   std::vector<std::vector<Expo>>& out) {
  if (pos == fb.nvars()) {
    out[fb.cap - degree_left].push_back(cur);
    return;
  }
  int d = fb.pos_degree[pos];
  int max_e = (d % 2 == 1) ? 1 : (d > 0 ? degree_left / d : 0);
  if (d > 0) max_e = std::min(max_e, degree_left / d);
  for (int e = 0; e <= max_e; ++e) {
    cur[pos] = e;
    enumerate_rec(fb, pos + 1, degree_left - e * d, cur, out);
  }
  cur[pos] = 0;
}

bool lex_desc(const Expo& a, const Expo& b) {
  // Descending lexicographic: larger exponent vector first.
  return a > b;
}

}  // namespace

FreeBasis::FreeBasis(std::vector<GenSpec> gens_, int cap_)
    : gens(std::move(gens_)), cap(cap_) {
  for (const auto& g : gens) {
    if (g.degree < 1)
      throw std::invalid_argument("generator '" + g.name +
                                  "' must have degree >= 1");
  }
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (gens[i].degree % 2 == 1) order.push_back(i);
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (gens[i].degree % 2 == 0) order.push_back(i);
  for (int p : order) pos_degree.push_back(gens[p].degree);

  monos.assign(cap + 1, {});
  Expo cur(nvars(), 0);
  enumerate_rec(*this, 0, cap, cur, monos);
  mono_index.assign(cap + 1, {});
  for (int k = 0; k <= cap; ++k) {
    std::sort(monos[k].begin(), monos[k].end(), lex_desc);
    for (int i = 0; i < static_cast<int>(monos[k].size()); ++i)
      mono_index[k][monos[k][i]] = i;
  }
}

int FreeBasis::degree_of(const Expo& e) const {
  int d = 0;
  for (int p = 0; p < nvars(); ++p) d += e[p] * pos_degree[p];
  return d;
}

int FreeBasis::index_of(int degree, const Expo& e) const {
  if (degree < 0 || degree > cap) return -1;
  auto it = mono_index[degree].find(e);
  return it == mono_index[degree].end() ? -1 : it->second;
}

int FreeBasis::pos_of_gen(int decl_index) const {
  for (int p = 0; p < nvars(); ++p)
    if (order[p] == decl_index) return p;
  return -1;
}

int FreeBasis::gen_by_name(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (gens[i].name == name) return i;
  return -1;
}

std::optional<std::pair<int, Expo>> FreeBasis::mono_mul(const Expo& a,
                                                        const Expo& b) const {
  Expo r(nvars());
  for (int p = 0; p < nvars(); ++p) {
    if (pos_degree[p] % 2 == 1 && a[p] + b[p] > 1) return std::nullopt;
    r[p] = a[p] + b[p];
  }
  // Koszul sign: inversions between odd variables of a and odd variables of b.
  long inv = 0;
  for (int pa = 0; pa < nvars(); ++pa) {
    if (pos_degree[pa] % 2 == 0 || a[pa] == 0) continue;
    for (int pb = 0; pb < pa; ++pb) {
      if (pos_degree[pb] % 2 == 0 || b[pb] == 0) continue;
      ++inv;  // variable pa in a must move past variable pb in b
    }
  }
  return std::make_pair(inv % 2 == 0 ? 1 : -1, r);
}

std::string FreeBasis::mono_str(const Expo& e) const {
  std::string s;
  for (int p = 0; p < nvars(); ++p) {
    if (e[p] == 0) continue;
    if (!s.empty()) s += "*";
    s += gens[order[p]].name;
    if (e[p] > 1) s += "^" + std::to_string(e[p]);
  }
  return s.empty() ? "1" : s;
}

Mat FreeBasis::mono_d(const Expo& e, const std::vector<Mat>& dgen) const {
  int deg = degree_of(e);
  if (deg + 1 > cap)
    throw std::invalid_argument("mono_d: degree " + std::to_string(deg + 1) +
                                " exceeds cap");
  Mat out(dim(deg + 1), 1);
  // Flatten into ordered factor occurrences and differentiate each in place.
  int prefix_deg = 0;
  Expo prefix(nvars(), 0);
  for (int p = 0; p < nvars(); ++p) {
    for (int occ = 0; occ < e[p]; ++occ) {
      // suffix = e - prefix - this occurrence
      Expo suffix = e;
      for (int t = 0; t < nvars(); ++t) suffix[t] -= prefix[t];
      suffix[p] -= 1;
      const Mat& dg = dgen[p];
      if (dg.rows > 0 && !dg.is_zero()) {
        int dg_deg = pos_degree[p] + 1;
        for (int n = 0; n < dim(dg_deg); ++n) {
          if (dg.at(n, 0) == 0) continue;
          auto m1 = mono_mul(prefix, monos[dg_deg][n]);
          if (!m1) continue;
          auto m2 = mono_mul(m1->second, suffix);
          if (!m2) continue;
          int idx = index_of(deg + 1, m2->second);
          if (idx < 0)
            throw std::logic_error("mono_d: product degree out of range");
          Rat sgn((prefix_deg % 2 == 0 ? 1 : -1) * m1->first * m2->first);
          out.at(idx, 0) += sgn * dg.at(n, 0);
        }
      }
      prefix[p] += 1;
      prefix_deg += pos_degree[p];
    }
  }
  return out;
}

namespace {

struct Term {
  Rat coef;
  std::vector<std::pair<int, int>> factors;  // (declaration index, exponent)
};

class Parser {
 public:
  Parser(const FreeBasis& fb, const std::string& s) : fb_(fb), s_(s) {}

  std::vector<Term> parse() {
    std::vector<Term> terms;
    skip_ws();
    if (done()) return terms;
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = (get() == '-');
    while (true) {
      Term t = parse_term();
      if (neg) t.coef = -t.coef;
      terms.push_back(std::move(t));
      skip_ws();
      if (done()) break;
      char c = get();
      if (c == '+')
        neg = false;
      else if (c == '-')
        neg = true;
      else
        fail(std::string("unexpected character '") + c + "'");
    }
    return terms;
  }

 private:
  const FreeBasis& fb_;
  const std::string& s_;
  size_t i_ = 0;

  bool done() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  char get() { return s_[i_++]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++i_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial '" + s_ + "': " + why +
                                " at offset " + std::to_string(i_));
  }

  Term parse_term() {
    Term t;
    t.coef = 1;
    bool saw_factor = false;
    bool saw_coef = false;
    while (true) {
      skip_ws();
      if (done()) break;
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        if (saw_coef || saw_factor) fail("unexpected number");
        t.coef *= parse_rat();
        saw_coef = true;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.factors.push_back(parse_factor());
        saw_factor = true;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (!done() && peek() == '*') {
        get();
        continue;
      }
      break;
    }
    if (!saw_factor && !saw_coef) fail("empty term");
    return t;
  }

  Rat parse_rat() {
    std::string num;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
      num += get();
    skip_ws();
    if (!done() && peek() == '/') {
      get();
      skip_ws();
      std::string den;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
        den += get();
      if (den.empty()) fail("missing denominator");
      return rat_parse(num + "/" + den);
    }
    return rat_parse(num);
  }

  std::pair<int, int> parse_factor() {
    std::string name;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                       peek() == '_'))
      name += get();
    int gi = fb_.gen_by_name(name);
    if (gi < 0) fail("unknown generator '" + name + "'");
    int expo = 1;
    skip_ws();
    if (!done() && peek() == '^') {
      get();
      skip_ws();
      std::string e;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
        e += get();
      if (e.empty()) fail("missing exponent");
      expo = std::stoi(e);
      if (expo < 0) fail("negative exponent");
    }
    return {gi, expo};
  }
};

}  // namespace

PolyByDegree poly_parse(const FreeBasis& fb, const std::string& text) {
  PolyByDegree out;
  std::string trimmed;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  if (trimmed.empty() || trimmed == "0") return out;

  for (const Term& t : Parser(fb, text).parse()) {
    // Koszul-normalize the written factor sequence: flatten occurrences; the
    // sign is the parity of inversions among odd-variable occurrences.
    std::vector<int> odd_positions;  // variable-order positions, as written
    Expo e(fb.nvars(), 0);
    bool zero = false;
    for (auto [gi, expo] : t.factors) {
      int pos = fb.pos_of_gen(gi);
      if (fb.pos_degree[pos] % 2 == 1) {
        if (expo >= 2 || e[pos] + expo > 1) {
          zero = true;
          break;
        }
        if (expo == 1) odd_positions.push_back(pos);
        e[pos] += expo;
      } else {
        e[pos] += expo;
      }
    }
    if (zero) continue;
    long inv = 0;
    for (size_t a = 0; a < odd_positions.size(); ++a)
      for (size_t b = a + 1; b < odd_positions.size(); ++b)
        if (odd_positions[a] > odd_positions[b]) ++inv;
    Rat coef = t.coef * Rat(inv % 2 == 0 ? 1 : -1);
    int deg = fb.degree_of(e);
    if (deg > fb.cap)
      throw std::invalid_argument("polynomial '" + text + "': term degree " +
                                  std::to_string(deg) + " exceeds cap " +
                                  std::to_string(fb.cap));
    auto it = out.find(deg);
    if (it == out.end())
      it = out.emplace(deg, Mat(fb.dim(deg), 1)).first;
    int idx = fb.index_of(deg, e);
    it->second.at(idx, 0) += coef;
  }
  // Drop components that cancelled to zero.
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Mat poly_parse_homogeneous(const FreeBasis& fb, const std::string& text,
                           int degree) {
  PolyByDegree p = poly_parse(fb, text);
  Mat v(fb.dim(degree), 1);
  for (auto& [d, vec] : p) {
    if (d != degree)
      throw std::invalid_argument("polynomial '" + text +
                                  "' is not homogeneous of degree " +
                                  std::to_string(degree) +
                                  " (has a component in degree " +
                                  std::to_string(d) + ")");
    v = vec;
  }
  return v;
}

std::string poly_str(const FreeBasis& fb, int degree, const Mat& v) {
  if (v.rows != fb.dim(degree))
    throw std::invalid_argument("poly_str: dimension mismatch");
  std::string s;
  for (int i = 0; i < v.rows; ++i) {
    const Rat& c = v.at(i, 0);
    if (c == 0) continue;
    std::string mono = fb.mono_str(fb.monos[degree][i]);
    std::string piece;
    if (c == 1)
      piece = mono;
    else if (c == -1)
      piece = "-" + mono;
    else
      piece = rat_str(c) + (mono == "1" ? "" : "*" + mono);
    if (s.empty())
      s = piece;
    else if (!piece.empty() && piece[0] == '-')
      s += " - " + piece.substr(1);
    else
      s += " + " + piece;
  }
  return s.empty() ? "0" : s;
}

}  // namespace equimod
