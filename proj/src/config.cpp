#include "dfock/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "dfock/errors.hpp"

namespace dfock {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  fail(ErrorKind::ConfigParseError,
       "field '" + std::string(key) + "': cannot parse '" + std::string(value) + "' as " + std::string(expected));
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) bad(key, text, "a number");
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) bad(key, text, "a nonnegative integer");
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < -1000000 || v > 1000000)
    bad(key, text, "an integer");
  return static_cast<int>(v);
}

std::vector<double> to_doubles(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& p : split(text, ',')) out.push_back(to_double(key, p));
  return out;
}

// "a..b" expands to the integers a, a+1, ..., b.
std::vector<int> to_ints(std::string_view key, std::string_view text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (const std::string& p : split(text, ',')) {
    const std::size_t dots = p.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(key, p));
      continue;
    }
    const int a = to_int(key, std::string_view(p).substr(0, dots));
    const int b = to_int(key, std::string_view(p).substr(dots + 2));
    if (b < a || b - a > 10000) bad(key, text, "an increasing range a..b");
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

std::string fmt(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<double> fixed(std::string_view key, std::string_view text, std::size_t n, std::string_view what) {
  std::vector<double> v = to_doubles(key, text);
  if (v.size() != n) bad(key, text, what);
  return v;
}

struct Field {
  const char* name;
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field number_field(const char* name, T RunConfig::*member) {
  return {name,
          [member](RunConfig& c, std::string_view k, std::string_view v) {
            if constexpr (std::is_same_v<T, double>) {
              c.*member = to_double(k, v);
            } else if constexpr (std::is_same_v<T, int>) {
              c.*member = to_int(k, v);
            } else {
              c.*member = static_cast<T>(to_unsigned(k, v));
            }
          },
          [member](const RunConfig& c) {
            if constexpr (std::is_same_v<T, double>) {
              return fmt(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field string_field(const char* name, std::string RunConfig::*member) {
  return {name, [member](RunConfig& c, std::string_view, std::string_view v) { c.*member = trim(v); },
          [member](const RunConfig& c) { return c.*member; }};
}

Field list_field(const char* name, std::vector<double> RunConfig::*member) {
  return {name, [member](RunConfig& c, std::string_view k, std::string_view v) { c.*member = to_doubles(k, v); },
          [member](const RunConfig& c) { return fmt(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      string_field("weight", &RunConfig::weight),
      string_field("region", &RunConfig::region),
      string_field("family", &RunConfig::family),
      string_field("symbol", &RunConfig::symbol),
      {"z",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const auto p = fixed(k, v, 2, "x,y");
         c.z = {p[0], p[1]};
       },
       [](const RunConfig& c) { return fmt(c.z.real()) + "," + fmt(c.z.imag()); }},
      number_field("delta", &RunConfig::delta),
      {"domain",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const auto p = fixed(k, v, 4, "x0,y0,x1,y1");
         c.domain = {p[0], p[1], p[2], p[3]};
         if (!c.domain.valid()) bad(k, v, "a rectangle with x0 <= x1 and y0 <= y1");
       },
       [](const RunConfig& c) {
         return fmt(c.domain.x0) + "," + fmt(c.domain.y0) + "," + fmt(c.domain.x1) + "," + fmt(c.domain.y1);
       }},
      list_field("s_ladder", &RunConfig::s_ladder),
      number_field("s", &RunConfig::s),
      number_field("probe_n", &RunConfig::probe_n),
      number_field("kappa", &RunConfig::kappa),
      number_field("epsilon", &RunConfig::epsilon),
      number_field("m", &RunConfig::m),
      list_field("r_ladder", &RunConfig::r_ladder),
      list_field("sigma_ladder", &RunConfig::sigma_ladder),
      list_field("radii", &RunConfig::radii),
      number_field("centers", &RunConfig::centers),
      number_field("samples_per_disk", &RunConfig::samples_per_disk),
      number_field("probe_pitch", &RunConfig::probe_pitch),
      number_field("n_max", &RunConfig::n_max),
      number_field("p", &RunConfig::p),
      number_field("r", &RunConfig::r),
      {"lambdas", [](RunConfig& c, std::string_view k, std::string_view v) { c.lambdas = fixed(k, v, 3, "l,l',l''"); },
       [](const RunConfig& c) { return fmt(c.lambdas); }},
      number_field("c", &RunConfig::c),
      number_field("lp_trials", &RunConfig::lp_trials),
      number_field("c_frac", &RunConfig::c_frac),
      number_field("test_functions", &RunConfig::test_functions),
      {"degree_ladder",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.degree_ladder = to_ints(k, v); },
       [](const RunConfig& c) { return fmt(c.degree_ladder); }},
      list_field("s_fracs", &RunConfig::s_fracs),
      number_field("trials", &RunConfig::trials),
      number_field("mc_points", &RunConfig::mc_points),
      {"disk",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const auto p = fixed(k, v, 3, "cx,cy,radius");
         c.disk = {{p[0], p[1]}, p[2]};
       },
       [](const RunConfig& c) {
         return fmt(c.disk.center.real()) + "," + fmt(c.disk.center.imag()) + "," + fmt(c.disk.radius);
       }},
      number_field("level", &RunConfig::level),
      {"C",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (trim(v) == "auto") {
           c.big_c.reset();
         } else {
           c.big_c = to_double(k, v);
         }
       },
       [](const RunConfig& c) { return c.big_c ? fmt(*c.big_c) : std::string("auto"); }},
      list_field("levels", &RunConfig::levels),
      number_field("seed", &RunConfig::seed),
      string_field("out", &RunConfig::out),
      number_field("rho_tol", &RunConfig::rho_tol),
      number_field("tail_tol", &RunConfig::tail_tol),
      number_field("radial_panels", &RunConfig::radial_panels),
      number_field("panel_points", &RunConfig::panel_points),
      number_field("angular_nodes", &RunConfig::angular_nodes),
      number_field("area_samples", &RunConfig::area_samples),
  };
  return table;
}

}  // namespace

void RunConfig::set_field(std::string_view key, std::string_view value) {
  std::string k = trim(key);
  for (char& ch : k)
    if (ch == '-') ch = '_';
  for (const Field& f : fields())
    if (k == f.name) {
      f.set(*this, k, value);
      return;
    }
  fail(ErrorKind::ConfigParseError, "unknown field '" + std::string(key) + "'");
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.name) + " = " + f.get(*this) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.name);
  return keys;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::ConfigParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      cfg.set_field(std::string_view(t).substr(0, eq), std::string_view(t).substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::ConfigParseError, "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace dfock
