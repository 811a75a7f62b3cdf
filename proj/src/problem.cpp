// Copyright 2026 The qmsroot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmsroot/problem.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qmsroot/expr.hpp"

namespace qmsroot {

namespace {

// Maps JSON pointers to the line where each value starts. Only run on text
// that already parsed, so the scanner can be forgiving.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : t_(text) {
    value("");
  }

  int line_of(std::string path) const {
    for (;;) {
      auto it = lines_.find(path);
      if (it != lines_.end()) return it->second;
      if (path.empty()) return 0;
      path.erase(path.rfind('/'));
    }
  }

 private:
  void ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) {
      if (t_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  std::string string_token() {
    std::string out;
    ++i_;  // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\' && i_ + 1 < t_.size()) out += t_[i_++];
      out += t_[i_++];
    }
    ++i_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  void value(const std::string& path) {
    ws();
    if (i_ >= t_.size()) return;
    lines_.emplace(path, line_);
    const char c = t_[i_];
    if (c == '{') {
      ++i_;
      for (;;) {
        ws();
        if (i_ >= t_.size() || t_[i_] == '}') break;
        if (t_[i_] == ',') {
          ++i_;
          continue;
        }
        const std::string key = string_token();
        ws();
        if (i_ < t_.size() && t_[i_] == ':') ++i_;
        value(path + "/" + escape(key));
      }
      ++i_;
    } else if (c == '[') {
      ++i_;
      int index = 0;
      for (;;) {
        ws();
        if (i_ >= t_.size() || t_[i_] == ']') break;
        if (t_[i_] == ',') {
          ++i_;
          continue;
        }
        value(path + "/" + std::to_string(index++));
      }
      ++i_;
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < t_.size() && t_[i_] != ',' && t_[i_] != ']' && t_[i_] != '}' &&
             !std::isspace(static_cast<unsigned char>(t_[i_]))) {
        ++i_;
      }
    }
  }

  const std::string& t_;
  std::size_t i_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Ctx {
 public:
  Ctx(std::string source, const LineIndex* lines) : source_(std::move(source)), lines_(lines) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (lines_) os << ":" << lines_->line_of(path);
    os << ": " << (path.empty() ? "/" : path) << ": " << msg;
    throw Error(ErrorCode::InvalidInput, os.str());
  }

  void keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed,
            std::initializer_list<const char*> required = {}) const {
    if (!obj.is_object()) fail(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!ok.count(it.key())) fail(path + "/" + it.key(), "unknown key '" + it.key() + "'");
    }
    for (const char* r : required) {
      if (!obj.contains(r)) fail(path, std::string("missing required key '") + r + "'");
    }
  }

  double real(const json& v, const std::string& path) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return eval_expression(v.get<std::string>());
      } catch (const Error& e) {
        fail(path, e.what());
      }
    }
    fail(path, "expected a number or an expression string");
  }

  long integer(const json& v, const std::string& path, long lo, long hi) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi) {
      fail(path, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
    }
    return x;
  }

  std::uint64_t seed(const json& v, const std::string& path) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
    fail(path, "expected a non-negative integer");
  }

  cplx entry(const json& v, const std::string& path) const {
    if (v.is_array()) {
      if (v.size() != 2) fail(path, "complex entries are [re, im]");
      return {real(v[0], path + "/0"), real(v[1], path + "/1")};
    }
    return real(v, path);
  }

  CMatrix matrix(const json& v, const std::string& path, int n) const {
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
      fail(path, "expected " + std::to_string(n) + " rows");
    }
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const std::string rp = path + "/" + std::to_string(i);
      if (!v[i].is_array() || static_cast<int>(v[i].size()) != n) {
        fail(rp, "expected a row of " + std::to_string(n) + " entries");
      }
      for (int j = 0; j < n; ++j) m(i, j) = entry(v[i][j], rp + "/" + std::to_string(j));
    }
    return m;
  }

 private:
  std::string source_;
  const LineIndex* lines_;
};

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset to line/column
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    throw Error(ErrorCode::InvalidInput, source + ":" + std::to_string(line) + ":" +
                                             std::to_string(col) + ": invalid JSON (" + what +
                                             ")");
  }
}

void read_tolerances(const Ctx& ctx, const json& t, const std::string& path,
                     FeasibilityTolerances& tol, double* density, double* validation) {
  if (density) {
    ctx.keys(t, path, {"rank", "feasibility", "psd", "density", "validation"});
  } else {
    ctx.keys(t, path, {"rank", "feasibility", "psd"});
  }
  auto positive = [&](const char* key, double& out) {
    if (!t.contains(key)) return;
    const double v = ctx.real(t[key], path + "/" + key);
    if (!(v > 0.0)) ctx.fail(path + "/" + key, "tolerance must be positive");
    out = v;
  };
  positive("rank", tol.rank);
  positive("feasibility", tol.feasibility);
  positive("psd", tol.psd);
  if (density) positive("density", *density);
  if (validation) positive("validation", *validation);
}

Problem build_problem(const json& doc, const Ctx& ctx) {
  ctx.keys(doc, "",
           {"name", "description", "n", "density", "jumps", "s", "tolerances", "solver", "seed",
            "expected"},
           {"n", "density", "jumps"});
  Problem p;
  p.input = doc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) ctx.fail("/name", "expected a string");
    p.name = doc["name"].get<std::string>();
  }
  if (doc.contains("description") && !doc["description"].is_string()) {
    ctx.fail("/description", "expected a string");
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    ctx.keys(s, "/solver", {"max_iterations", "restarts", "relaxation", "size_cap"});
    if (s.contains("max_iterations")) {
      p.search.max_iterations =
          static_cast<int>(ctx.integer(s["max_iterations"], "/solver/max_iterations", 0, 1000000));
    }
    if (s.contains("restarts")) {
      p.search.restarts = static_cast<int>(ctx.integer(s["restarts"], "/solver/restarts", 0, 1000));
    }
    if (s.contains("relaxation")) {
      const double r = ctx.real(s["relaxation"], "/solver/relaxation");
      if (!(r > 0.0 && r <= 1.9)) ctx.fail("/solver/relaxation", "must lie in (0, 1.9]");
      p.search.relaxation = r;
    }
    if (s.contains("size_cap")) {
      p.size_cap = static_cast<int>(ctx.integer(s["size_cap"], "/solver/size_cap", 1, 6));
    }
  }
  p.n = static_cast<int>(ctx.integer(doc["n"], "/n", 1, 1000));
  if (p.n > p.size_cap) {
    throw Error(ErrorCode::SizeCapExceeded, "n = " + std::to_string(p.n) +
                                                " exceeds the size cap " +
                                                std::to_string(p.size_cap));
  }
  if (doc.contains("tolerances")) {
    read_tolerances(ctx, doc["tolerances"], "/tolerances", p.tolerances, &p.density_tol,
                    &p.validation_tol);
  }
  if (doc.contains("s")) {
    p.s = ctx.real(doc["s"], "/s");
    if (!(p.s >= 0.0 && p.s <= 1.0)) ctx.fail("/s", "s must lie in [0, 1]");
  }
  if (doc.contains("seed")) p.seed = ctx.seed(doc["seed"], "/seed");
  p.search.seed = p.seed;
  if (doc.contains("expected")) {
    const json& e = doc["expected"];
    auto k = e.is_string() ? verdict_from_string(e.get<std::string>()) : std::nullopt;
    if (!k) {
      ctx.fail("/expected", "expected one of FEASIBLE, NOT_CONSISTENT, NOT_PSD, INDETERMINATE");
    }
    p.expected = k;
  }

  const json& d = doc["density"];
  if (d.is_object()) {
    ctx.keys(d, "/density", {"diag"}, {"diag"});
    const json& diag = d["diag"];
    if (!diag.is_array() || static_cast<int>(diag.size()) != p.n) {
      ctx.fail("/density/diag", "expected " + std::to_string(p.n) + " entries");
    }
    p.density = CMatrix::Zero(p.n, p.n);
    for (int i = 0; i < p.n; ++i) {
      p.density(i, i) = ctx.entry(diag[i], "/density/diag/" + std::to_string(i));
    }
  } else {
    p.density = ctx.matrix(d, "/density", p.n);
  }
  try {
    (void)DensityState::from_matrix(p.density, p.density_tol);
  } catch (const Error& e) {
    ctx.fail("/density", e.what());
  }

  const json& js = doc["jumps"];
  if (!js.is_array()) ctx.fail("/jumps", "expected an array");
  for (std::size_t k = 0; k < js.size(); ++k) {
    const std::string jp = "/jumps/" + std::to_string(k);
    ctx.keys(js[k], jp, {"V", "omega", "weight"}, {"V"});
    JumpInput j;
    j.v = ctx.matrix(js[k]["V"], jp + "/V", p.n);
    if (js[k].contains("omega")) j.omega = ctx.real(js[k]["omega"], jp + "/omega");
    if (js[k].contains("weight")) j.weight = ctx.real(js[k]["weight"], jp + "/weight");
    p.jumps.push_back(std::move(j));
  }
  try {
    (void)p.spec();
  } catch (const Error& e) {
    ctx.fail("/jumps", e.what());
  }
  return p;
}

}  // namespace

LindbladSpec Problem::spec() const {
  return LindbladSpec(DensityState::from_matrix(density, density_tol), jumps);
}

Problem parse_problem(const std::string& text, const std::string& source) {
  const json doc = parse_json_text(text, source);
  const LineIndex lines(text);
  return build_problem(doc, Ctx(source, &lines));
}

Problem problem_from_json(const json& doc, const std::string& source) {
  return build_problem(doc, Ctx(source, nullptr));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path), path); }

std::vector<std::string> preset_ids() { return {"2x2-gns", "2x2-kms", "3x3-gns", "3x3-kms"}; }

std::optional<json> preset_document(const std::string& id) {
  const json e12 = json::array({json::array({0, 1}), json::array({0, 0})});
  const json e21 = json::array({json::array({0, 0}), json::array({1, 0})});
  json doc;
  if (id == "2x2-gns" || id == "2x2-kms") {
    doc["n"] = 2;
    doc["density"] = {{"diag", {"(1+1/pi)/2", "(1-1/pi)/2"}}};
    doc["jumps"] = json::array({
        {{"V", e12}, {"omega", "log((pi-1)/(pi+1))"}},
        {{"V", e21}, {"omega", "-log((pi-1)/(pi+1))"}},
    });
    doc["expected"] = "FEASIBLE";
  } else if (id == "3x3-gns" || id == "3x3-kms") {
    json e23 = json::array({{0, 0, 0}, {0, 0, 1}, {0, 0, 0}});
    json e32 = json::array({{0, 0, 0}, {0, 0, 0}, {0, 1, 0}});
    doc["n"] = 3;
    doc["density"] = {
        {"diag", {"1/(1+pi^2+e^2)", "pi^2/(1+pi^2+e^2)", "e^2/(1+pi^2+e^2)"}}};
    doc["jumps"] = json::array({
        {{"V", e23}, {"omega", "2-2*log(pi)"}},
        {{"V", e32}, {"omega", "2*log(pi)-2"}},
    });
    doc["expected"] = id == "3x3-gns" ? "NOT_CONSISTENT" : "NOT_PSD";
  } else {
    return std::nullopt;
  }
  doc["name"] = id;
  doc["s"] = id.ends_with("kms") ? 0.5 : 0.0;
  doc["seed"] = 0;
  return doc;
}

SweepConfig parse_sweep_config(const std::string& text, const std::string& source) {
  const json doc = parse_json_text(text, source);
  const LineIndex lines(text);
  const Ctx ctx(source, &lines);
  ctx.keys(doc, "",
           {"samples", "seed", "mode", "pinned", "s", "threshold", "predicate_tol",
            "log_lambda_range", "tolerances", "threads"});
  SweepConfig c;
  if (doc.contains("samples")) {
    c.samples = static_cast<int>(ctx.integer(doc["samples"], "/samples", 0, 10000000));
  }
  if (doc.contains("seed")) c.seed = ctx.seed(doc["seed"], "/seed");
  if (doc.contains("mode")) {
    const json& m = doc["mode"];
    auto mode = m.is_string() ? sweep_mode_from_string(m.get<std::string>()) : std::nullopt;
    if (!mode) ctx.fail("/mode", "expected one of random, projected, mixed");
    c.mode = *mode;
  }
  if (doc.contains("pinned") && !doc["pinned"].is_null()) {
    const json& p = doc["pinned"];
    ctx.keys(p, "/pinned", {"lambda2", "lambda3"}, {"lambda2", "lambda3"});
    LambdaPoint lp{ctx.real(p["lambda2"], "/pinned/lambda2"),
                   ctx.real(p["lambda3"], "/pinned/lambda3")};
    if (!(lp.lambda2 > 0.0) || !(lp.lambda3 > 0.0)) ctx.fail("/pinned", "lambdas must be positive");
    c.pinned = lp;
  }
  if (doc.contains("s")) {
    c.s = ctx.real(doc["s"], "/s");
    if (!(c.s >= 0.0 && c.s <= 1.0)) ctx.fail("/s", "s must lie in [0, 1]");
  }
  if (doc.contains("threshold")) {
    c.threshold = ctx.real(doc["threshold"], "/threshold");
    if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) ctx.fail("/threshold", "must lie in [0, 1]");
  }
  if (doc.contains("predicate_tol")) {
    c.predicate_tol = ctx.real(doc["predicate_tol"], "/predicate_tol");
    if (!(c.predicate_tol > 0.0)) ctx.fail("/predicate_tol", "must be positive");
  }
  if (doc.contains("log_lambda_range")) {
    c.log_lambda_range = ctx.real(doc["log_lambda_range"], "/log_lambda_range");
    if (!(c.log_lambda_range >= 0.0 && c.log_lambda_range <= 20.0)) {
      ctx.fail("/log_lambda_range", "must lie in [0, 20]");
    }
  }
  if (doc.contains("tolerances")) {
    read_tolerances(ctx, doc["tolerances"], "/tolerances", c.tolerances, nullptr, nullptr);
  }
  if (doc.contains("threads")) {
    c.threads = static_cast<int>(ctx.integer(doc["threads"], "/threads", 1, 256));
  }
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  return parse_sweep_config(read_file(path), path);
}

std::string input_hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

}  // namespace qmsroot
