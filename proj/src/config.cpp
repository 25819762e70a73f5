#include "mns/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "mns/error.hpp"
#include "mns/io.hpp"

namespace mns::cli {

namespace {

constexpr std::string_view kTags[] = {"run",     "energy",   "borderline", "heat-check",
                                      "trilinear", "perturb", "galerkin",   "a2-check"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_int(std::string_view s, T& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

// A plain number or a multiple of pi ("pi", "32pi", "0.5pi").
bool parse_length(std::string_view s, double& out) {
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    const auto head = s.substr(0, s.size() - 2);
    double m = 1.0;
    if (!head.empty() && !parse_double(head, m)) return false;
    out = m * std::numbers::pi;
    return true;
  }
  return parse_double(s, out);
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true") return out = true, true;
  if (s == "false") return out = false, true;
  return false;
}

bool parse_levels(std::string_view s, std::vector<int>& out) {
  out.clear();
  while (true) {
    const auto comma = s.find(',');
    int v = 0;
    if (!parse_int(trim(s.substr(0, comma)), v)) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    s = s.substr(comma + 1);
  }
}

struct Key {
  std::string_view name;
  std::function<bool(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string str(std::size_t v) { return std::to_string(v); }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto dbl = [&](std::string_view name, double RunConfig::*m) {
      k.push_back({name, [m](RunConfig& c, std::string_view v) { return parse_double(v, c.*m); },
                   [m](const RunConfig& c) { return format_double(c.*m); }});
    };
    auto size = [&](std::string_view name, std::size_t RunConfig::*m) {
      k.push_back({name, [m](RunConfig& c, std::string_view v) { return parse_int(v, c.*m); },
                   [m](const RunConfig& c) { return str(c.*m); }});
    };
    auto flag = [&](std::string_view name, bool RunConfig::*m) {
      k.push_back({name, [m](RunConfig& c, std::string_view v) { return parse_bool(v, c.*m); },
                   [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); }});
    };
    auto text = [&](std::string_view name, std::string RunConfig::*m) {
      k.push_back({name,
                   [m](RunConfig& c, std::string_view v) {
                     if (v.empty()) return false;
                     c.*m = std::string(v);
                     return true;
                   },
                   [m](const RunConfig& c) { return c.*m; }});
    };
    dbl("T", &RunConfig::T);
    size("a2.fields", &RunConfig::a2_fields);
    dbl("dt", &RunConfig::dt);
    text("experiment", &RunConfig::experiment);
    k.push_back({"galerkin.levels",
                 [](RunConfig& c, std::string_view v) { return parse_levels(v, c.galerkin_levels); },
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.galerkin_levels.size(); ++i)
                     s += (i ? "," : "") + std::to_string(c.galerkin_levels[i]);
                   return s;
                 }});
    k.push_back({"grid.L", [](RunConfig& c, std::string_view v) { return parse_length(v, c.L); },
                 [](const RunConfig& c) { return format_double(c.L); }});
    size("grid.n", &RunConfig::n);
    size("heat.samples", &RunConfig::heat_samples);
    dbl("heat.width", &RunConfig::heat_width);
    dbl("init.a", &RunConfig::init_a);
    dbl("init.energy", &RunConfig::init_energy);
    dbl("init.k0", &RunConfig::init_k0);
    k.push_back({"mollify.N",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "none") {
                     c.mollify_N.reset();
                     return true;
                   }
                   int N = 0;
                   if (!parse_int(v, N)) return false;
                   c.mollify_N = N;
                   return true;
                 },
                 [](const RunConfig& c) { return c.mollify_N ? std::to_string(*c.mollify_N) : std::string("none"); }});
    size("morrey.max_cells", &RunConfig::morrey_max_cells);
    text("output.dir", &RunConfig::output_dir);
    size("output.every", &RunConfig::output_every);
    dbl("perturb.delta", &RunConfig::perturb_delta);
    k.push_back({"seed", [](RunConfig& c, std::string_view v) { return parse_int(v, c.seed); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    flag("solver.dealias", &RunConfig::dealias);
    flag("solver.freeze_velocity", &RunConfig::freeze_velocity);
    k.push_back({"trilinear.N", [](RunConfig& c, std::string_view v) { return parse_int(v, c.trilinear_N); },
                 [](const RunConfig& c) { return std::to_string(c.trilinear_N); }});
    size("trilinear.samples", &RunConfig::trilinear_samples);
    size("trilinear.trials", &RunConfig::trilinear_trials);
    std::sort(k.begin(), k.end(), [](const Key& a, const Key& b) { return a.name < b.name; });
    return k;
  }();
  return table;
}

}  // namespace

std::span<const std::string_view> experiment_tags() { return kTags; }

void RunConfig::validate() const {
  if (std::find(std::begin(kTags), std::end(kTags), experiment) == std::end(kTags))
    throw ConfigError("unknown experiment '" + experiment + "'");
  if (n < 8 || n % 2 != 0) throw ConfigError("grid.n must be an even number >= 8");
  if (!(L > 0.0)) throw ConfigError("grid.L must be positive");
  if (!(init_energy >= 0.0) || !(init_k0 >= 0.0)) throw ConfigError("init.energy and init.k0 must be non-negative");
  if (!(perturb_delta >= 0.0)) throw ConfigError("perturb.delta must be non-negative");
  if (!(heat_width > 0.0) || heat_samples < 2) throw ConfigError("heat.width must be positive and heat.samples >= 2");
  if (trilinear_samples < 2 || trilinear_N < 0) throw ConfigError("trilinear.samples >= 2 and trilinear.N >= 0");
  if (morrey_max_cells == 0) throw ConfigError("morrey.max_cells must be positive");
  solver_config(*this).validate();
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::vector<std::string_view> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find('#');
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (std::find(seen.begin(), seen.end(), it->name) != seen.end())
      throw ConfigError(where + "repeated key '" + std::string(key) + "'");
    seen.push_back(it->name);
    if (!it->set(c, value))
      throw ConfigError(where + "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  c.validate();
  return c;
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys()) {
    out += k.name;
    out += " = ";
    out += k.get(c);
    out += '\n';
  }
  return out;
}

Grid make_grid(const RunConfig& c) { return Grid(c.n, c.L); }

solver::SolverConfig solver_config(const RunConfig& c) {
  solver::SolverConfig s;
  s.dt = c.dt;
  s.T = c.T;
  s.dealias = c.dealias;
  s.mollify = c.mollify_N;
  s.output_every = c.output_every;
  s.freeze_velocity = c.freeze_velocity;
  s.blowup_dir = c.output_dir;
  return s;
}

InitParams init_params(const RunConfig& c) {
  InitParams p;
  p.seed = c.seed;
  p.a = c.init_a;
  p.k0 = c.init_k0;
  p.energy = c.init_energy;
  return p;
}

}  // namespace mns::cli
