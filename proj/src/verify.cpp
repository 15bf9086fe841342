#include "qcb/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace qcb {

namespace {

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CheckError("bad integer '" + tok + "' in factor spec");
    }
  }
  return out;
}

struct Setup {
  std::shared_ptr<const RootDatum> datum;
  std::shared_ptr<const CanonicalBasis> cb;
};

Setup setup(const Json& params) {
  if (!params.contains("datum")) throw CheckError("check parameters lack \"datum\"");
  auto d = std::make_shared<RootDatum>(load_datum(params["datum"].get<std::string>()));
  const int bound = params.value("bound", 8);
  return {d, std::make_shared<CanonicalBasis>(make_falgebra(*d, bound))};
}

IntVec weight_of(const RootDatum& d, const Json& pairings) {
  auto v = pairings.get<std::vector<int>>();
  if (static_cast<int>(v.size()) != d.rank()) throw CheckError("weight has the wrong number of pairings");
  return d.weight_with_pairings(v);
}

std::vector<CBElement> cb_upto(const CanonicalBasis& cb, int max_tr) {
  std::vector<CBElement> out;
  for (const Deg& nu : cb.algebra().weights_upto(max_tr))
    for (const CBElement& b : cb.at(nu)) out.push_back(b);
  return out;
}

void record_bvec(PositivityReport& r, const BasedModule& m, const BVec& y, const std::string& where) {
  for (const auto& [k, c] : y.parts)
    for (int e = 0; e < c.size(); ++e)
      if (!c(e).is_zero()) r.record(c(e), Lattice::Nvv, where + " -> " + m.label(k, e));
}

PositivityReport check_structure(const Json& p) {
  Setup s = setup(p);
  const int max_tr = p.value("max_tr", 6);
  PositivityReport r;
  for (int t = 2; t <= max_tr; ++t)
    for (int a = 1; a < t; ++a)
      for (const Deg& n1 : s.cb->algebra().weights_of_trace(a))
        for (const Deg& n2 : s.cb->algebra().weights_of_trace(t - a))
          r.merge(verify_structure_positivity(*s.cb, n1, n2));
  return r;
}

PositivityReport check_transition(const Json& p) {
  Setup s = setup(p);
  auto m = build_tensor(s.cb, parse_factors(*s.datum, p.at("factors").get<std::string>()), p.value("depth", -1));
  auto t = std::dynamic_pointer_cast<const TensorProduct>(m);
  if (!t) throw CheckError("transition check needs at least two factors");
  return transition_positivity(*t);
}

PositivityReport check_b_action(const Json& p) {
  Setup s = setup(p);
  auto m = build_tensor(s.cb, parse_factors(*s.datum, p.at("factors").get<std::string>()), -1);
  const auto bs = cb_upto(*s.cb, p.value("max_tr", 2));
  PositivityReport r;
  for (const Key& k : m->keys())
    for (int j = 0; j < m->dim(k); ++j) {
      const BVec x = m->unit(k, j);
      for (const CBElement& b : bs) {
        if (trace(b.nu) == 0) continue;
        const std::string name = s.cb->expansion_str(b);
        record_bvec(r, *m, m->act_minus(b.vec, x), "(" + name + ")^- " + m->label(k, j));
        record_bvec(r, *m, m->act_plus(b.vec, x), "(" + name + ")^+ " + m->label(k, j));
      }
    }
  return r;
}

std::vector<DotCB> lifts(const Udot& u, const Json& p) {
  const RootDatum& d = u.datum();
  const auto bs = cb_upto(u.cb(), p.value("max_tr", 2));
  const int margin = p.value("margin", 1);
  std::vector<DotCB> out;
  for (const Json& z : p.at("zetas")) {
    const IntVec zeta = weight_of(d, z);
    for (const CBElement& b1 : bs)
      for (const CBElement& b2 : bs) out.push_back(u.diamond_lift({b1.nu, b1.index}, zeta, {b2.nu, b2.index}, margin));
  }
  return out;
}

PositivityReport check_udot_mult(const Json& p, std::vector<std::string>& failures) {
  Setup s = setup(p);
  Udot u(s.cb);
  const auto ls = lifts(u, p);
  PositivityReport r;
  for (const DotCB& a : ls)
    for (const DotCB& b : ls) {
      UdotPositivity q = u.verify_positivity(a, b, p.value("sigma", true));
      r.merge(q.report);
      failures.insert(failures.end(), q.failures.begin(), q.failures.end());
    }
  return r;
}

PositivityReport check_udot_simple(const Json& p) {
  Setup s = setup(p);
  Udot u(s.cb);
  PositivityReport r;
  for (const DotCB& a : lifts(u, p))
    for (const Json& l : p.at("lambdas")) r.merge(u.simple_positivity(a, weight_of(*s.datum, l)));
  return r;
}

Json check(const std::string& name, Json params) {
  return Json{{"check", name}, {"params", std::move(params)}};
}

}  // namespace

std::vector<FactorSpec> parse_factors(const RootDatum& d, const std::string& spec) {
  std::vector<FactorSpec> out;
  std::stringstream ss(spec);
  std::string tok;
  while (ss >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw CheckError("factor '" + tok + "' lacks a ':'");
    const std::string kind = tok.substr(0, colon);
    FactorSpec f;
    if (kind == "LW") f.kind = ModuleKind::SimpleLW;
    else if (kind == "HW") f.kind = ModuleKind::SimpleHW;
    else if (kind == "V") f.kind = ModuleKind::Verma;
    else throw CheckError("unknown factor kind '" + kind + "'");
    const auto vals = parse_ints(tok.substr(colon + 1));
    if (static_cast<int>(vals.size()) != d.rank())
      throw CheckError("factor '" + tok + "' needs " + std::to_string(d.rank()) + " pairings");
    if (f.kind != ModuleKind::Verma)
      for (int v : vals)
        if (v < 0) throw CheckError("factor '" + tok + "' is not dominant");
    f.lambda = d.weight_with_pairings(vals);
    out.push_back(f);
  }
  if (out.empty()) throw CheckError("empty factor spec");
  return out;
}

std::shared_ptr<const BasedModule> build_tensor(std::shared_ptr<const CanonicalBasis> cb,
                                                const std::vector<FactorSpec>& factors, int depth) {
  std::shared_ptr<const BasedModule> out;
  for (const FactorSpec& f : factors) {
    int h;
    if (f.kind == ModuleKind::Verma) {
      if (depth < 0) throw CheckError("Verma factors need an explicit depth");
      h = depth;
    } else {
      h = full_height(*cb, f.lambda);
      if (depth >= 0) h = std::min(h, depth);
    }
    auto a = atomic(cb, f.kind, f.lambda, h);
    out = out ? std::shared_ptr<const BasedModule>(std::make_shared<TensorProduct>(out, a)) : a;
  }
  return out;
}

Json CheckReport::json() const {
  Json j{{"check", check}, {"params", params}, {"status", pass ? "pass" : "fail"}, {"checked", checked},
         {"max_pos_deg", max_pos_deg}, {"min_neg_deg", min_neg_deg}};
  if (!pass) j["counterexample"] = counterexample;
  return j;
}

CheckReport CheckReport::from_json(const Json& j) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.params = j.at("params");
  r.pass = j.at("status") == "pass";
  r.checked = j.at("checked").get<long>();
  r.max_pos_deg = j.at("max_pos_deg").get<int>();
  r.min_neg_deg = j.at("min_neg_deg").get<int>();
  if (j.contains("counterexample")) r.counterexample = j["counterexample"].get<std::string>();
  return r;
}

std::vector<std::string> check_names() {
  return {"structure_constants", "transition", "b_action", "udot_mult", "udot_simple"};
}

CheckReport run_check(const std::string& name, const Json& params) {
  const auto names = check_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw CheckError("unknown check '" + name + "'");
  CheckReport out;
  out.check = name;
  out.params = params;
  const auto start = std::chrono::steady_clock::now();
  PositivityReport r;
  std::vector<std::string> failures;
  try {
    if (name == "structure_constants") r = check_structure(params);
    else if (name == "transition") r = check_transition(params);
    else if (name == "b_action") r = check_b_action(params);
    else if (name == "udot_mult") r = check_udot_mult(params, failures);
    else r = check_udot_simple(params);
  } catch (const CheckError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw CheckError(std::string("bad parameters: ") + e.what());
  } catch (const std::exception& e) {
    failures.push_back(std::string("error: ") + e.what());
  }
  out.checked = r.checked;
  out.max_pos_deg = r.max_pos_deg;
  out.min_neg_deg = r.min_neg_deg;
  out.pass = r.ok() && failures.empty();
  if (!r.violations.empty()) out.counterexample = r.violations.front().where + " = " + r.violations.front().value.str();
  else if (!failures.empty()) out.counterexample = failures.front();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<CheckSpec> default_suite(const std::string& datum) {
  std::vector<Json> c;
  auto with = [&](Json p) {
    p["datum"] = datum;
    return p;
  };
  if (datum == "a1") {
    c.push_back(check("structure_constants", with({{"max_tr", 8}})));
    for (const char* f : {"LW:1 HW:1", "LW:2 HW:1", "LW:2 HW:2", "HW:1 HW:1", "HW:2 HW:1", "HW:2 HW:2", "HW:1 HW:1 HW:1",
                          "HW:2 HW:1 HW:1", "LW:1 HW:1 HW:1"})
      c.push_back(check("transition", with({{"factors", f}, {"depth", 4}})));
    for (const char* f : {"HW:2", "LW:2", "HW:3", "LW:1 HW:1", "LW:2 HW:1", "HW:1 HW:1"})
      c.push_back(check("b_action", with({{"factors", f}, {"max_tr", 3}})));
    c.push_back(check("udot_mult", with({{"max_tr", 2}, {"zetas", Json::array({{-2}, {-1}, {0}, {1}, {2}})}})));
    c.push_back(check("udot_simple",
                      with({{"max_tr", 2}, {"zetas", Json::array({{-1}, {0}, {2}})}, {"lambdas", Json::array({{2}, {3}})}})));
  } else if (datum == "a2") {
    c.push_back(check("structure_constants", with({{"max_tr", 6}})));
    for (const char* f : {"LW:1,0 HW:0,1", "LW:1,1 HW:1,0", "HW:1,0 HW:0,1", "HW:1,0 HW:1,0", "HW:1,0 HW:0,1 HW:1,0"})
      c.push_back(check("transition", with({{"factors", f}, {"depth", 4}})));
    for (const char* f : {"HW:1,1", "LW:1,1", "LW:1,0 HW:0,1"})
      c.push_back(check("b_action", with({{"factors", f}, {"max_tr", 2}})));
    c.push_back(check("udot_mult", with({{"max_tr", 1}, {"zetas", Json::array({{0, 0}, {1, -1}})}})));
    c.push_back(check("udot_simple",
                      with({{"max_tr", 1}, {"zetas", Json::array({{0, 0}, {1, 1}})}, {"lambdas", Json::array({{1, 1}})}})));
  } else if (datum == "a2-thick") {
    c.push_back(check("structure_constants", with({{"max_tr", 6}, {"bound", 6}})));
  } else if (datum == "a1-thick" || datum == "rank2-affine") {
    c.push_back(check("structure_constants", with({{"max_tr", 6}, {"bound", 6}})));
  } else {
    c.push_back(check("structure_constants", with({{"max_tr", 4}, {"bound", 4}})));
  }
  std::vector<CheckSpec> out;
  for (const Json& j : c) out.push_back({j["check"].get<std::string>(), j["params"]});
  return out;
}

std::vector<CheckSpec> parse_suite(const Json& config) {
  Json list = config;
  std::vector<std::string> disabled;
  if (config.is_object()) {
    list = config.value("checks", Json::array());
    if (config.contains("disabled")) disabled = config["disabled"].get<std::vector<std::string>>();
  }
  if (!list.is_array()) throw CheckError("suite config must be an array of checks");
  const auto names = check_names();
  std::vector<CheckSpec> out;
  for (const Json& j : list) {
    if (!j.is_object() || !j.contains("check")) throw CheckError("suite entry lacks \"check\"");
    const std::string name = j["check"].get<std::string>();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw CheckError("unknown check '" + name + "'");
    if (std::find(disabled.begin(), disabled.end(), name) != disabled.end()) continue;
    out.push_back({name, j.value("params", Json::object())});
  }
  return out;
}

std::vector<CheckReport> run_suite(const std::vector<CheckSpec>& checks, int jobs, const Cache& cache) {
  std::vector<CheckSpec> todo = checks;
  std::stable_sort(todo.begin(), todo.end(), [](const CheckSpec& a, const CheckSpec& b) {
    return std::make_pair(a.name, a.params.dump()) < std::make_pair(b.name, b.params.dump());
  });
  std::vector<CheckReport> out(todo.size());
  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (size_t k; (k = next++) < todo.size();) {
      try {
        const CheckSpec& c = todo[k];
        std::string key;
        if (cache.enabled()) {
          const std::string datum = datum_json(load_datum(c.params.value("datum", std::string())));
          key = Cache::key(datum, c.name, c.params.dump());
          if (auto hit = cache.get(key)) {
            out[k] = CheckReport::from_json(Json::parse(*hit));
            out[k].cached = true;
            continue;
          }
        }
        out[k] = run_check(c.name, c.params);
        if (cache.enabled()) cache.put(key, out[k].json().dump());
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace qcb
