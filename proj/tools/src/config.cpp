#include "szo_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace szo::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::config, path + ": " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string type_name(const json& v) {
  return v.type_name();
}

// Typed, path-aware view of one JSON object. Every key must be consumed or
// declared optional; whatever is left is reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object, got " + type_name(obj_));
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key)) fail(join(path_, key), "missing required key");
    return obj_.at(key);
  }

  double real(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(join(path_, key), "expected a number, got " + type_name(v));
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(join(path_, key), "must be finite");
    return x;
  }

  double real_or(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  std::uint64_t unsigned_int(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(join(path_, key), "expected a non-negative integer, got " + type_name(v));
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_int(key) : fallback;
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(join(path_, key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(join(path_, key), "expected a boolean, got " + type_name(v));
    return v.get<bool>();
  }

  // Scalar fills all `dim` entries; an array must have exactly `dim` numbers.
  DenseVector vector(const std::string& key, std::size_t dim) {
    const json& v = raw(key);
    const std::string at = join(path_, key);
    DenseVector out(static_cast<Eigen::Index>(dim));
    if (v.is_number()) {
      out.setConstant(v.get<double>());
    } else if (v.is_array()) {
      if (v.size() != dim) {
        fail(at, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
      }
      for (std::size_t i = 0; i < dim; ++i) {
        if (!v[i].is_number()) fail(at + "[" + std::to_string(i) + "]", "expected a number");
        out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
      }
    } else {
      fail(at, "expected a number or an array, got " + type_name(v));
    }
    if (!out.allFinite()) fail(at, "entries must be finite");
    return out;
  }

  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) fail(join(path_, item.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ObjectiveSpec parse_objective(const json& doc) {
  ObjectReader r(doc, "objective");
  ObjectiveSpec spec;
  const std::string kind = r.string("kind");
  try {
    spec.kind = parse_objective_kind(kind);
  } catch (const Error&) {
    fail("objective.kind", "unknown objective '" + kind + "' (expected logistic, ridge, beale or matyas)");
  }
  const bool regression = spec.kind == ObjectiveKind::logistic || spec.kind == ObjectiveKind::ridge;
  if (regression) {
    spec.d = r.unsigned_int("d");
    if (spec.d < 1) fail("objective.d", "must be >= 1");
    spec.dataset_seed = r.unsigned_or("dataset_seed", 0);
    if (r.has("dataset_file")) spec.dataset_file = r.string("dataset_file");
    if (spec.dataset_file) {
      spec.n_rows = r.unsigned_or("n_rows", 0);
      spec.x_star = r.has("x_star") ? r.vector("x_star", spec.d) : DenseVector::Zero(static_cast<Eigen::Index>(spec.d));
    } else {
      spec.n_rows = r.unsigned_int("n_rows");
      if (spec.n_rows < 1) fail("objective.n_rows", "must be >= 1");
      spec.x_star = r.vector("x_star", spec.d);
    }
    if (spec.kind == ObjectiveKind::ridge) {
      spec.c = r.real_or("c", 0.1);
      if (!(spec.c > 0.0)) fail("objective.c", "must be positive");
      spec.noise_std = r.real_or("noise_std", 0.0);
      if (spec.noise_std < 0.0) fail("objective.noise_std", "must be non-negative");
    }
  } else {
    spec.d = r.unsigned_or("d", 2);
    if (spec.d != 2) fail("objective.d", std::string(to_string(spec.kind)) + " is two-dimensional");
    spec.x_star = DenseVector();
  }
  r.finish();
  return spec;
}

MethodSpec parse_method_spec(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  MethodSpec m;
  const std::string name = r.string("method");
  try {
    m.method = parse_method(name);
  } catch (const Error&) {
    fail(path + ".method", "unknown method '" + name + "'");
  }
  if (m.method == Method::filter_form) {
    fail(path + ".method", "filter_form is driven by the discretization parameters; use hlf_szo");
  }
  m.label = r.string_or("label", std::string(to_string(m.method)));
  if (m.label.empty()) fail(path + ".label", "must not be empty");
  if (m.label.find_first_of(",\"\n") != std::string::npos) fail(path + ".label", "must not contain commas, quotes or newlines");
  m.hp.eta = r.real("eta");
  if (!(m.hp.eta > 0.0)) fail(path + ".eta", "must be positive");
  m.hp.r = r.real_or("r", 0.1);
  if (!(m.hp.r > 0.0)) fail(path + ".r", "must be positive");
  m.hp.alpha = r.real_or("alpha", 0.0);
  if (!(m.hp.alpha >= 0.0 && m.hp.alpha <= 1.0)) fail(path + ".alpha", "must lie in [0, 1]");
  m.hp.beta = r.real_or("beta", 0.0);
  if (!(m.hp.beta >= 0.0)) fail(path + ".beta", "must be non-negative");
  const std::string init = r.string_or("z_init", "first_query");
  try {
    m.hp.z_init = parse_z_init(init);
  } catch (const Error&) {
    fail(path + ".z_init", "unknown start '" + init + "' (expected first_query, first_query_hold or symmetric_pair)");
  }
  r.finish();
  return m;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  const ExperimentSpec& a = spec;
  const ExperimentSpec& b = o.spec;
  const bool same_x0 = a.x0.size() == b.x0.size() && a.x0 == b.x0;
  return case_label == o.case_label && out_dir == o.out_dir && workers == o.workers && beta_sweep == o.beta_sweep &&
         a.objective == b.objective && a.methods == b.methods && a.T == b.T && a.n_trials == b.n_trials &&
         a.base_seed == b.base_seed && same_x0 && a.record_stride == b.record_stride &&
         a.shared_dataset == b.shared_dataset;
}

RunConfig parse_config(const json& doc) {
  ObjectReader r(doc, "");
  RunConfig cfg;
  cfg.case_label = r.string_or("case", "custom");
  if (cfg.case_label.empty()) fail("case", "must not be empty");

  cfg.spec.objective = parse_objective(r.raw("objective"));

  const json& methods = r.raw("methods");
  if (!methods.is_array()) fail("methods", "expected an array, got " + type_name(methods));
  if (methods.empty()) fail("methods", "at least one method is required");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    MethodSpec m = parse_method_spec(methods[i], path);
    if (!labels.insert(m.label).second) fail(path + ".label", "duplicate label '" + m.label + "'");
    cfg.spec.methods.push_back(std::move(m));
  }

  const std::uint64_t T = r.unsigned_int("T");
  if (T > static_cast<std::uint64_t>(INT64_MAX)) fail("T", "too large");
  cfg.spec.T = static_cast<std::int64_t>(T);
  cfg.spec.n_trials = r.unsigned_int("n_trials");
  if (cfg.spec.n_trials < 1) fail("n_trials", "must be >= 1");
  cfg.spec.base_seed = r.unsigned_or("base_seed", 0);
  cfg.spec.x0 = r.vector("x0", cfg.spec.objective.d);
  const std::uint64_t stride = r.unsigned_or("record_stride", 1);
  if (stride < 1) fail("record_stride", "must be >= 1");
  cfg.spec.record_stride = static_cast<std::int64_t>(stride);
  cfg.spec.shared_dataset = r.boolean_or("shared_dataset", true);

  cfg.out_dir = r.string_or("out", "");
  cfg.workers = r.unsigned_or("workers", 0);

  if (r.has("beta_sweep")) {
    const json& betas = r.raw("beta_sweep");
    if (!betas.is_array() || betas.empty()) fail("beta_sweep", "expected a non-empty array of numbers");
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const std::string at = "beta_sweep[" + std::to_string(i) + "]";
      if (!betas[i].is_number()) fail(at, "expected a number");
      const double b = betas[i].get<double>();
      if (!(b >= 0.0) || !std::isfinite(b)) fail(at, "must be non-negative");
      cfg.beta_sweep.push_back(b);
    }
  }
  r.finish();
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const Error& e) {
    throw Error(ErrorKind::config, path.string() + ": " + e.what());
  }
}

namespace {

json vector_json(const DenseVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json spec_json(const RunConfig& cfg) {
  const ExperimentSpec& s = cfg.spec;
  json obj;
  obj["kind"] = std::string(to_string(s.objective.kind));
  obj["d"] = s.objective.d;
  if (s.objective.kind == ObjectiveKind::logistic || s.objective.kind == ObjectiveKind::ridge) {
    obj["n_rows"] = s.objective.n_rows;
    obj["x_star"] = vector_json(s.objective.x_star);
    obj["dataset_seed"] = s.objective.dataset_seed;
    if (s.objective.dataset_file) obj["dataset_file"] = *s.objective.dataset_file;
    if (s.objective.kind == ObjectiveKind::ridge) {
      obj["c"] = s.objective.c;
      obj["noise_std"] = s.objective.noise_std;
    }
  }
  json methods = json::array();
  for (const auto& m : s.methods) {
    methods.push_back({{"method", std::string(to_string(m.method))},
                       {"label", m.label},
                       {"eta", m.hp.eta},
                       {"r", m.hp.r},
                       {"alpha", m.hp.alpha},
                       {"beta", m.hp.beta},
                       {"z_init", std::string(to_string(m.hp.z_init))}});
  }
  json doc;
  doc["case"] = cfg.case_label;
  doc["objective"] = obj;
  doc["methods"] = methods;
  doc["T"] = s.T;
  doc["n_trials"] = s.n_trials;
  doc["base_seed"] = s.base_seed;
  doc["x0"] = vector_json(s.x0);
  doc["record_stride"] = s.record_stride;
  doc["shared_dataset"] = s.shared_dataset;
  if (!cfg.beta_sweep.empty()) doc["beta_sweep"] = cfg.beta_sweep;
  return doc;
}

}  // namespace

json to_json(const RunConfig& cfg) {
  json doc = spec_json(cfg);
  if (!cfg.out_dir.empty()) doc["out"] = cfg.out_dir;
  if (cfg.workers != 0) doc["workers"] = cfg.workers;
  return doc;
}

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::uint64_t config_hash(const RunConfig& cfg) {
  // Output location and worker count do not change any result byte.
  const std::string canonical = spec_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace szo::cli
