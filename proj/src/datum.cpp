#include "qcb/datum.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace qcb {

int CartanDatum::index(const std::string& label) const {
  auto it = std::find(gens.begin(), gens.end(), label);
  if (it == gens.end()) throw DatumError("unknown generator " + label);
  return static_cast<int>(it - gens.begin());
}

int CartanDatum::dot(int i, const Deg& nu) const {
  int s = 0;
  for (int k = 0; k < rank(); ++k) s += form(i, k) * nu[k];
  return s;
}

int CartanDatum::dot(const Deg& a, const Deg& b) const {
  int s = 0;
  for (int k = 0; k < rank(); ++k)
    if (a[k]) s += a[k] * dot(k, b);
  return s;
}

void CartanDatum::validate() const {
  const int n = rank();
  if (form.rows() != n || form.cols() != n) throw DatumError("cartan matrix has wrong shape");
  for (int i = 0; i < n; ++i) {
    if (form(i, i) != 2) throw DatumError("i.i != 2 for generator " + gens[i]);
    for (int j = 0; j < n; ++j) {
      if (form(i, j) != form(j, i)) throw DatumError("cartan form is not symmetric at " + gens[i] + "," + gens[j]);
      if (i != j && form(i, j) > 0) throw DatumError("positive off-diagonal entry at " + gens[i] + "," + gens[j]);
    }
  }
  auto sorted = gens;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DatumError("duplicate generator label");
}

namespace {

long long det(IntMat m) {
  // Bareiss elimination.
  const int n = static_cast<int>(m.rows());
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<long long>();
  long long prev = 1, sign = 1;
  for (int k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      int r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.row(k).swap(a.row(r));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return n ? sign * a(n - 1, n - 1) : 1;
}

int matrix_rank(const IntMat& m) {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<long long>();
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.row(r).swap(a.row(p));
    for (int i = r + 1; i < a.rows(); ++i) {
      long long f = a(i, c), g = a(r, c);
      a.row(i) = a.row(i) * g - a.row(r) * f;
      long long h = 0;
      for (int j = 0; j < a.cols(); ++j) h = std::gcd(h, a(i, j));
      if (h > 1) a.row(i) /= h;
    }
    ++r;
  }
  return r;
}

}  // namespace

RootDatum RootDatum::simply_connected(const CartanDatum& c) {
  c.validate();
  RootDatum d;
  d.cartan = c;
  d.rankY = d.rankX = c.rank();
  d.pairing = IntMat::Identity(c.rank(), c.rank());
  d.embedY = IntMat::Identity(c.rank(), c.rank());
  d.embedX = c.form;
  return d;
}

void RootDatum::validate() const {
  cartan.validate();
  const int n = rank();
  if (pairing.rows() != rankY || pairing.cols() != rankX) throw DatumError("pairing has wrong shape");
  if (embedY.rows() != rankY || embedY.cols() != n) throw DatumError("embedY has wrong shape");
  if (embedX.rows() != rankX || embedX.cols() != n) throw DatumError("embedX has wrong shape");
  if (rankY != rankX || std::abs(det(pairing)) != 1) throw DatumError("pairing is not perfect");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (pair_i(i, root(j)) != cartan.form(i, j))
        throw DatumError("<" + cartan.gens[i] + "," + cartan.gens[j] + "'> differs from the cartan form");
  if (matrix_rank(embedY) != n) throw DatumError("image of I in Y is not linearly independent");
}

IntVec RootDatum::to_X(const Deg& nu) const {
  IntVec x = IntVec::Zero(rankX);
  for (int i = 0; i < rank(); ++i)
    if (nu[i]) x += nu[i] * root(i);
  return x;
}

bool RootDatum::dominant(const IntVec& x) const {
  for (int i = 0; i < rank(); ++i)
    if (pair_i(i, x) < 0) return false;
  return true;
}

std::vector<int> RootDatum::pairings(const IntVec& x) const {
  std::vector<int> out(static_cast<size_t>(rank()));
  for (int i = 0; i < rank(); ++i) out[i] = pair_i(i, x);
  return out;
}

IntVec RootDatum::weight_with_pairings(const std::vector<int>& vals) const {
  IntMat a = embedY.transpose() * pairing;
  IntVec b = Eigen::Map<const IntVec>(vals.data(), static_cast<int>(vals.size()));
  auto x = integer_solve(a, b);
  if (!x) throw DatumError("no weight with the requested pairings");
  return *x;
}

std::optional<IntVec> integer_solve(const IntMat& a0, const IntVec& b) {
  using LMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  LMat a = a0.cast<long long>();
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  LMat u = LMat::Identity(n, n);
  std::vector<int> pivot(static_cast<size_t>(m), -1);
  int col = 0;
  for (int r = 0; r < m && col < n; ++r) {
    // Euclid on columns col..n-1 of row r.
    for (;;) {
      int best = -1;
      for (int c = col; c < n; ++c)
        if (a(r, c) != 0 && (best < 0 || std::llabs(a(r, c)) < std::llabs(a(r, best)))) best = c;
      if (best < 0) break;
      if (best != col) {
        a.col(best).swap(a.col(col));
        u.col(best).swap(u.col(col));
      }
      bool done = true;
      for (int c = col + 1; c < n; ++c) {
        if (a(r, c) == 0) continue;
        long long q = a(r, c) / a(r, col);
        a.col(c) -= q * a.col(col);
        u.col(c) -= q * u.col(col);
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(r, col) != 0) pivot[r] = col++;
  }
  Eigen::Matrix<long long, Eigen::Dynamic, 1> y = Eigen::Matrix<long long, Eigen::Dynamic, 1>::Zero(n);
  for (int r = 0; r < m; ++r) {
    long long rhs = b(r);
    for (int c = 0; c < n; ++c)
      if (c != pivot[r]) rhs -= a(r, c) * y(c);
    if (pivot[r] < 0) {
      if (rhs != 0) return std::nullopt;
      continue;
    }
    if (rhs % a(r, pivot[r]) != 0) return std::nullopt;
    y(pivot[r]) = rhs / a(r, pivot[r]);
  }
  return (u * y).cast<int>();
}

RootDatum thicken(const RootDatum& d) {
  const int n = d.rank();
  RootDatum t;
  t.cartan.gens = d.cartan.gens;
  for (int i = 0; i < n; ++i) {
    std::string label = d.cartan.gens[i] + "'";
    while (std::find(t.cartan.gens.begin(), t.cartan.gens.end(), label) != t.cartan.gens.end()) label += "'";
    t.cartan.gens.push_back(label);
  }
  t.cartan.form = IntMat::Zero(2 * n, 2 * n);
  t.cartan.form.topLeftCorner(n, n) = d.cartan.form;
  t.cartan.form.topRightCorner(n, n) = -IntMat::Identity(n, n);
  t.cartan.form.bottomLeftCorner(n, n) = -IntMat::Identity(n, n);
  t.cartan.form.bottomRightCorner(n, n) = 2 * IntMat::Identity(n, n);

  t.rankY = d.rankY + n;
  t.rankX = d.rankX + n;
  t.pairing = IntMat::Zero(t.rankY, t.rankX);
  t.pairing.topLeftCorner(d.rankY, d.rankX) = d.pairing;
  t.pairing.bottomRightCorner(n, n) = IntMat::Identity(n, n);

  IntMat a = d.embedY.transpose() * d.pairing;
  t.embedY = IntMat::Zero(t.rankY, 2 * n);
  t.embedX = IntMat::Zero(t.rankX, 2 * n);
  for (int i = 0; i < n; ++i) {
    IntVec rhs = IntVec::Zero(n);
    rhs(i) = -1;
    auto x = integer_solve(a, rhs);
    if (!x) throw DatumError("thickening needs x with <j, x> = -delta_ij");
    t.prime_x.push_back(*x);
    t.embedY.col(i).head(d.rankY) = d.embedY.col(i);
    t.embedY(d.rankY + i, n + i) = 1;
    t.embedX.col(i).head(d.rankX) = d.embedX.col(i);
    t.embedX(d.rankX + i, i) = -1;
    t.embedX.col(n + i).head(d.rankX) = *x;
    t.embedX(d.rankX + i, n + i) = 2;
  }
  t.base = std::make_shared<const RootDatum>(d);
  t.validate();
  return t;
}

IntVec odot(const RootDatum& t, const IntVec& zeta, const IntVec& lambda) {
  if (!t.base) throw DatumError("odot needs a thickened datum");
  const RootDatum& d = *t.base;
  if (!d.dominant(lambda)) throw DatumError("odot: lambda is not dominant");
  const int n = d.rank();
  IntVec out = IntVec::Zero(t.rankX);
  IntVec head = zeta + lambda;
  for (int i = 0; i < n; ++i) {
    int l = d.pair_i(i, lambda);
    head += l * t.prime_x[i];
    out(d.rankX + i) = l;
  }
  out.head(d.rankX) = head;
  return out;
}

IntVec lift_weight(const RootDatum& t, const IntVec& x) {
  IntVec out = IntVec::Zero(t.rankX);
  out.head(t.base->rankX) = x;
  return out;
}

Tower iterate(const RootDatum& d, const std::vector<IntVec>& lambdas) {
  if (lambdas.empty()) throw DatumError("iterate needs at least one weight");
  if (lambdas.size() > 4) throw DatumError("iterated thickening bound exceeded");
  Tower t;
  t.levels.push_back(std::make_shared<const RootDatum>(d));
  for (size_t k = 1; k < lambdas.size(); ++k) t.levels.push_back(std::make_shared<const RootDatum>(thicken(*t.levels.back())));
  // l_1 odot ... odot l_k = (l_1 odot ... odot l_{k-1}) odot (0 odot ... odot 0 odot l_k),
  // both factors living one level below.
  std::function<IntVec(const std::vector<IntVec>&)> rec = [&](const std::vector<IntVec>& ls) -> IntVec {
    if (ls.size() == 1) return ls[0];
    std::vector<IntVec> head(ls.begin(), ls.end() - 1);
    std::vector<IntVec> tail(ls.size() - 1, IntVec::Zero(d.rankX));
    tail.back() = ls.back();
    return odot(*t.levels[ls.size() - 1], rec(head), rec(tail));
  };
  t.weight = rec(lambdas);
  return t;
}

Deg reflect(const CartanDatum& c, int i, Deg beta) {
  int p = c.dot(i, beta);
  beta[i] -= p;
  return beta;
}

Deg act_root(const CartanDatum& c, const WeylWord& w, Deg beta) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) beta = reflect(c, *it, beta);
  return beta;
}

IntVec act(const RootDatum& d, const WeylWord& w, IntVec x) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) x -= d.pair_i(*it, x) * d.root(*it);
  return x;
}

bool descent(const CartanDatum& c, int i, const WeylWord& w) {
  Deg beta = unit_deg(c.rank(), i);
  for (int a : w.letters) beta = reflect(c, a, beta);
  return std::all_of(beta.begin(), beta.end(), [](int x) { return x <= 0; });
}

WeylWord demazure_product(const CartanDatum& c, const WeylWord& a, const WeylWord& b) {
  WeylWord w = b;
  for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
    if (!descent(c, *it, w)) w.letters.insert(w.letters.begin(), *it);
  return w;
}

bool same_element(const CartanDatum& c, const WeylWord& a, const WeylWord& b) {
  for (int i = 0; i < c.rank(); ++i)
    if (act_root(c, a, unit_deg(c.rank(), i)) != act_root(c, b, unit_deg(c.rank(), i))) return false;
  return true;
}

bool is_spherical(const std::vector<int>& J, const CartanDatum& c) {
  for (size_t k = 1; k <= J.size(); ++k) {
    IntMat m(static_cast<int>(k), static_cast<int>(k));
    for (size_t a = 0; a < k; ++a)
      for (size_t b = 0; b < k; ++b) m(static_cast<int>(a), static_cast<int>(b)) = c.form(J[a], J[b]);
    if (det(m) <= 0) return false;
  }
  return true;
}

namespace {

CartanDatum path(int n) {
  CartanDatum c;
  c.form = 2 * IntMat::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) c.form(i, i + 1) = c.form(i + 1, i) = -1;
  for (int i = 0; i < n; ++i) c.gens.push_back(std::to_string(i + 1));
  return c;
}

}  // namespace

RootDatum builtin_datum(const std::string& name) {
  if (name == "a1") {
    CartanDatum c = path(1);
    c.gens = {"i"};
    return RootDatum::simply_connected(c);
  }
  if (name == "a2") return RootDatum::simply_connected(path(2));
  if (name == "a1-thick") return thicken(builtin_datum("a1"));
  if (name == "a2-thick") return thicken(builtin_datum("a2"));
  if (name == "rank2-affine") {
    CartanDatum c = path(2);
    c.form(0, 1) = c.form(1, 0) = -2;
    return RootDatum::simply_connected(c);
  }
  throw DatumError("unknown built-in datum " + name);
}

RootDatum parse_datum_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DatumError(std::string("datum file is not valid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw DatumError(std::string("datum file lacks \"") + key + "\"");
    return j.at(key);
  };
  auto matrix = [](const nlohmann::json& m, const char* what) {
    if (!m.is_array() || m.empty()) throw DatumError(std::string(what) + " must be a nonempty matrix");
    IntMat out(static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    for (size_t r = 0; r < m.size(); ++r) {
      if (m[r].size() != m[0].size()) throw DatumError(std::string(what) + " has ragged rows");
      for (size_t c = 0; c < m[r].size(); ++c) out(static_cast<int>(r), static_cast<int>(c)) = m[r][c].get<int>();
    }
    return out;
  };
  try {
    CartanDatum c;
    c.gens = need("generators").get<std::vector<std::string>>();
    c.form = matrix(need("cartan"), "cartan");
    c.validate();
    if (!j.contains("pairing")) return RootDatum::simply_connected(c);
    RootDatum d;
    d.cartan = c;
    d.rankY = need("rankY").get<int>();
    d.rankX = need("rankX").get<int>();
    d.pairing = matrix(need("pairing"), "pairing");
    d.embedY = IntMat::Zero(d.rankY, c.rank());
    d.embedX = IntMat::Zero(d.rankX, c.rank());
    for (int i = 0; i < c.rank(); ++i) {
      auto y = need("embedY").at(c.gens[i]).get<std::vector<int>>();
      auto x = need("embedX").at(c.gens[i]).get<std::vector<int>>();
      if (static_cast<int>(y.size()) != d.rankY || static_cast<int>(x.size()) != d.rankX)
        throw DatumError("embedding of " + c.gens[i] + " has the wrong length");
      for (int k = 0; k < d.rankY; ++k) d.embedY(k, i) = y[k];
      for (int k = 0; k < d.rankX; ++k) d.embedX(k, i) = x[k];
    }
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw DatumError(std::string("malformed datum file: ") + e.what());
  }
}

RootDatum load_datum(const std::string& name_or_path) {
  std::ifstream in(name_or_path);
  if (!in) return builtin_datum(name_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_datum_json(ss.str());
}

std::string datum_json(const RootDatum& d) {
  nlohmann::json j;
  j["generators"] = d.cartan.gens;
  auto mat = [](const IntMat& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
      std::vector<int> row(static_cast<size_t>(m.cols()));
      for (int c = 0; c < m.cols(); ++c) row[c] = m(r, c);
      a.push_back(row);
    }
    return a;
  };
  j["cartan"] = mat(d.cartan.form);
  j["rankY"] = d.rankY;
  j["rankX"] = d.rankX;
  j["pairing"] = mat(d.pairing);
  for (int i = 0; i < d.rank(); ++i) {
    std::vector<int> y(d.embedY.col(i).data(), d.embedY.col(i).data() + d.rankY);
    std::vector<int> x(d.embedX.col(i).data(), d.embedX.col(i).data() + d.rankX);
    j["embedY"][d.cartan.gens[i]] = y;
    j["embedX"][d.cartan.gens[i]] = x;
  }
  return j.dump();
}

std::string deg_str(const Deg& nu) {
  std::string s = "(";
  for (size_t k = 0; k < nu.size(); ++k) s += (k ? "," : "") + std::to_string(nu[k]);
  return s + ")";
}

int trace(const Deg& nu) { return std::accumulate(nu.begin(), nu.end(), 0); }

Deg unit_deg(int n, int i, int k) {
  Deg d(static_cast<size_t>(n), 0);
  d[i] = k;
  return d;
}

Deg operator+(const Deg& a, const Deg& b) {
  Deg c(a);
  for (size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return c;
}

Deg operator-(const Deg& a, const Deg& b) {
  Deg c(a);
  for (size_t k = 0; k < c.size(); ++k) c[k] -= b[k];
  return c;
}

bool nonneg(const Deg& a) {
  return std::all_of(a.begin(), a.end(), [](int x) { return x >= 0; });
}

}  // namespace qcb
