#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "dfock/errors.hpp"
#include "dfock/regions.hpp"

namespace dfock {
namespace {

constexpr double kRequired = std::numeric_limits<double>::quiet_NaN();

struct LeafSpec {
  const char* name;
  std::vector<std::pair<const char*, double>> params;  // name, default (NaN = required)
};

const std::vector<LeafSpec>& leaf_specs() {
  static const std::vector<LeafSpec> specs = {
      {"disk", {{"cx", kRequired}, {"cy", kRequired}, {"r", kRequired}}},
      {"rect", {{"x0", kRequired}, {"y0", kRequired}, {"x1", kRequired}, {"y1", kRequired}}},
      {"halfplane", {{"c", kRequired}, {"theta", 0.0}}},
      {"polka", {{"pitch", kRequired}, {"dot", kRequired}, {"ox", 0.0}, {"oy", 0.0}}},
      {"sector",
       {{"cx", kRequired}, {"cy", kRequired}, {"r0", kRequired}, {"r1", kRequired}, {"th0", kRequired},
        {"th1", kRequired}}},
  };
  return specs;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Region parse() {
    Region r = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::RegionParseError,
         what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) error("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    if (begin < end && *begin == '+') ++begin;
    double v = 0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) error("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }

  Region leaf(const LeafSpec& spec) {
    std::vector<double> values;
    for (const auto& p : spec.params) values.push_back(p.second);
    std::vector<bool> set(values.size(), false);
    if (accept('(')) {
      std::size_t positional = 0;
      bool named_seen = false;
      if (!accept(')')) {
        do {
          skip_ws();
          const std::size_t save = pos_;
          std::size_t slot = values.size();
          if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            const std::string key = ident();
            if (accept('=')) {
              for (std::size_t i = 0; i < spec.params.size(); ++i)
                if (key == spec.params[i].first) slot = i;
              if (slot == values.size()) error("unknown parameter '" + key + "' for " + spec.name);
              named_seen = true;
            } else {
              pos_ = save;
            }
          }
          if (slot == values.size()) {
            if (named_seen) error("positional argument after named argument");
            if (positional >= values.size()) error(std::string("too many arguments for ") + spec.name);
            slot = positional++;
          }
          if (set[slot]) error(std::string("parameter '") + spec.params[slot].first + "' given twice");
          values[slot] = number();
          set[slot] = true;
        } while (accept(','));
        expect(')');
      }
    }
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::isnan(values[i])) error(std::string("missing parameter '") + spec.params[i].first + "' for " + spec.name);

    const std::string name = spec.name;
    try {
      if (name == "disk") return Region::disk({values[0], values[1]}, values[2]);
      if (name == "rect") return Region::rect({values[0], values[1], values[2], values[3]});
      if (name == "halfplane") return Region::halfplane(values[0], values[1]);
      if (name == "polka") return Region::polka(values[0], values[1], values[2], values[3]);
      return Region::sector({values[0], values[1]}, values[2], values[3], values[4], values[5]);
    } catch (const Error& e) {
      error(e.what());
    }
  }

  std::vector<Region> operands() {
    expect('(');
    std::vector<Region> out;
    do {
      out.push_back(expr());
    } while (accept(','));
    expect(')');
    return out;
  }

  Region expr() {
    const std::string name = ident();
    if (name == "full" || name == "plane" || name == "empty") {
      if (accept('(')) expect(')');
      return name == "empty" ? Region::empty() : Region::full();
    }
    if (name == "complement") {
      auto ops = operands();
      if (ops.size() != 1) error("complement takes exactly one operand");
      return Region::complement(ops[0]);
    }
    if (name == "union") return Region::unite(operands());
    if (name == "intersection") return Region::intersect(operands());
    for (const LeafSpec& spec : leaf_specs())
      if (name == spec.name) return leaf(spec);
    error("unknown region '" + name + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Region parse_region(std::string_view text) { return Parser(text).parse(); }

}  // namespace dfock
