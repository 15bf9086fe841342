#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qcb/verify.hpp"

using namespace qcb;

namespace {

constexpr int kUsage = 2;
constexpr int kFailed = 3;

struct Exit {
  int code;
  std::string message;
};

Deg parse_deg(const std::string& s, int rank) {
  Deg out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Exit{kUsage, "bad weight '" + s + "'"};
    }
  }
  if (static_cast<int>(out.size()) != rank || !nonneg(out))
    throw Exit{kUsage, "weight '" + s + "' must have " + std::to_string(rank) + " nonnegative entries"};
  return out;
}

RootDatum datum_or_exit(const std::string& name) {
  try {
    return load_datum(name);
  } catch (const DatumError& e) {
    throw Exit{kUsage, std::string("invalid datum: ") + e.what()};
  }
}

std::string cb_output(const RootDatum& d, const std::vector<Deg>& weights, int bound, bool json) {
  auto cb = std::make_shared<CanonicalBasis>(make_falgebra(d, bound));
  Json all = Json::array();
  std::ostringstream table;
  for (const Deg& nu : weights) {
    const auto& bs = cb->at(nu);
    try {
      cb->verify(nu);
    } catch (const CBFailure& e) {
      throw Exit{kFailed, std::string("canonical basis verification failed: ") + e.what()};
    }
    for (const CBElement& b : bs) {
      if (json) {
        Json terms = Json::array();
        for (const auto& [w, c] : b.expansion) terms.push_back({{"word", w.str(d.cartan)}, {"coeff", c.str()}});
        all.push_back({{"weight", nu}, {"index", b.index}, {"expansion", terms}});
      } else {
        table << deg_str(nu) << " #" << b.index << "  " << cb->expansion_str(b) << "\n";
      }
    }
  }
  return json ? all.dump(2) + "\n" : table.str();
}

int cmd_cb(const std::string& datum, const std::string& weight, int max_tr, const std::string& format,
           const std::string& cache_dir) {
  const RootDatum d = datum_or_exit(datum);
  std::vector<Deg> weights;
  int bound;
  if (!weight.empty()) {
    weights.push_back(parse_deg(weight, d.rank()));
    bound = std::max(1, trace(weights.back()));
  } else {
    if (max_tr < 0) throw Exit{kUsage, "give --weight or --max-tr"};
    bound = std::max(1, max_tr);
    for (int t = 0; t <= max_tr; ++t)
      for (const Deg& nu : make_falgebra(d, bound)->weights_of_trace(t)) weights.push_back(nu);
  }
  const Cache cache = Cache::open(cache_dir);
  const std::string key = Cache::key(datum_json(d), "cb", format + "|" + weight + "|" + std::to_string(max_tr));
  if (auto hit = cache.get(key)) {
    std::cout << *hit;
    return 0;
  }
  const std::string out = cb_output(d, weights, bound, format == "json");
  cache.put(key, out);
  std::cout << out;
  return 0;
}

std::string pure_label(const TensorProduct& t, const TensorProduct::Pure& p) {
  return t.first().label(p.ka, p.a) + " (x) " + t.second().label(p.kb, p.b);
}

int cmd_tensor_cb(const std::string& datum, const std::string& factors, int depth, int bound,
                  const std::string& format) {
  const RootDatum d = datum_or_exit(datum);
  std::vector<FactorSpec> fs;
  try {
    fs = parse_factors(d, factors);
  } catch (const CheckError& e) {
    throw Exit{kUsage, e.what()};
  }
  if (fs.size() < 2) throw Exit{kUsage, "--factors needs at least two factors"};
  auto cb = std::make_shared<CanonicalBasis>(make_falgebra(d, bound));
  auto t = std::dynamic_pointer_cast<const TensorProduct>(build_tensor(cb, fs, depth));
  const PositivityReport pos = transition_positivity(*t);

  const bool json = format == "json";
  Json all = Json::array();
  for (const Key& k : t->keys()) {
    const auto& block = t->block(k);
    const RatMat& tr = t->transition(k);
    Json basis = Json::array();
    for (const DiamondElement& e : t->diamond_basis(k)) {
      Json terms = Json::array();
      for (const auto& [key, c] : e.pure.parts)
        for (int j = 0; j < c.size(); ++j)
          if (!c(j).is_zero())
            terms.push_back({{"pure", pure_label(*t, block.basis[static_cast<size_t>(j)])}, {"coeff", c(j).str()}});
      basis.push_back({{"label", e.label}, {"expansion", terms}});
    }
    Json rows = Json::array();
    for (int r = 0; r < tr.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < tr.cols(); ++c) row.push_back(tr(r, c).str());
      rows.push_back(row);
    }
    Json entry{{"weight", k}, {"basis", basis}, {"transition", rows}};
    if (json) {
      all.push_back(entry);
      continue;
    }
    std::cout << "weight " << deg_str(k) << "\n";
    for (const Json& b : basis) {
      std::cout << "  " << b["label"].get<std::string>() << " =";
      bool first = true;
      for (const Json& term : b["expansion"]) {
        std::cout << (first ? " " : " + ") << "(" << term["coeff"].get<std::string>() << ") "
                  << term["pure"].get<std::string>();
        first = false;
      }
      std::cout << "\n";
    }
    std::cout << "  transition:\n";
    for (const Json& row : rows) {
      std::cout << "   ";
      for (const Json& x : row) std::cout << " " << x.get<std::string>();
      std::cout << "\n";
    }
  }
  if (json) std::cout << all.dump(2) << "\n";
  if (!pos.ok())
    throw Exit{kFailed, "transition entry outside N[v^-1]: " + pos.violations.front().where + " = " +
                            pos.violations.front().value.str()};
  return 0;
}

int cmd_verify(const std::string& datum, const std::vector<std::string>& suite, const std::string& config,
               int jobs, const std::string& cache_dir, const std::string& out_path) {
  const RootDatum d = datum_or_exit(datum);
  (void)d;
  std::vector<CheckSpec> checks;
  try {
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw Exit{kUsage, "cannot read suite config " + config};
      checks = parse_suite(Json::parse(in));
    } else {
      const auto all = default_suite(datum);
      const auto names = check_names();
      bool everything = false;
      for (const std::string& s : suite) {
        if (s == "default") {
          everything = true;
        } else if (std::find(names.begin(), names.end(), s) == names.end()) {
          throw Exit{kUsage, "unknown suite '" + s + "'"};
        }
      }
      for (const CheckSpec& c : all)
        if (everything || std::find(suite.begin(), suite.end(), c.name) != suite.end()) checks.push_back(c);
    }
  } catch (const CheckError& e) {
    throw Exit{kUsage, e.what()};
  } catch (const Json::exception& e) {
    throw Exit{kUsage, std::string("bad suite config: ") + e.what()};
  }

  std::vector<CheckReport> reports;
  try {
    reports = run_suite(checks, jobs, Cache::open(cache_dir));
  } catch (const CheckError& e) {
    throw Exit{kUsage, e.what()};
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Exit{kUsage, "cannot write " + out_path};
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  int failed = 0;
  for (const CheckReport& r : reports) {
    out << r.json().dump() << "\n";
    failed += r.pass ? 0 : 1;
    std::cerr << (r.pass ? "pass " : "FAIL ") << r.check << " " << r.params.dump() << " (" << r.checked
              << " coefficients" << (r.cached ? ", cached" : "") << ")\n";
  }
  std::cerr << reports.size() - static_cast<size_t>(failed) << "/" << reports.size() << " checks passed\n";
  return failed ? kFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact canonical bases of quantum groups, tensor products and U-dot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kArtifactVersion));

  std::string datum, weight, format = "table", cache_dir, factors, config, out_path;
  int max_tr = -1, depth = 2, bound = 8, jobs = 1;
  std::vector<std::string> suite{"default"};

  auto* cb = app.add_subcommand("cb", "canonical basis of f as divided-word expansions");
  cb->add_option("datum", datum, "built-in name or datum JSON file")->required();
  auto* w = cb->add_option("--weight", weight, "weight nu as comma-separated coefficients");
  cb->add_option("--max-tr", max_tr, "all weights of trace at most N")->excludes(w);
  cb->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
  cb->add_option("--cache-dir", cache_dir, "cache directory (default $QCB_CACHE_DIR)");

  auto* tc = app.add_subcommand("tensor-cb", "diamond basis and transition matrices of a tensor product");
  tc->add_option("datum", datum, "built-in name or datum JSON file")->required();
  tc->add_option("--factors", factors, "e.g. \"LW:1 HW:1\"")->required();
  tc->add_option("--weight-depth", depth, "depth of each factor");
  tc->add_option("--bound", bound, "degree bound of f");
  tc->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  auto* ve = app.add_subcommand("verify", "run the positivity suite; JSON lines on stdout");
  ve->add_option("datum", datum, "built-in name or datum JSON file")->required();
  ve->add_option("--suite", suite, "default, or check names")->expected(1, -1);
  ve->add_option("--config", config, "suite config JSON file");
  ve->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  ve->add_option("--cache-dir", cache_dir, "cache directory (default $QCB_CACHE_DIR)");
  ve->add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    if (*cb) return cmd_cb(datum, weight, max_tr, format, cache_dir);
    if (*tc) return cmd_tensor_cb(datum, factors, depth, bound, format);
    return cmd_verify(datum, suite, config, jobs, cache_dir, out_path);
  } catch (const Exit& e) {
    std::cerr << "qcb: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "qcb: " << e.what() << "\n";
    return 1;
  }
}
