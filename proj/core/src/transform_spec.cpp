#include "fconc/transform_spec.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "fconc/errors.hpp"

namespace fconc {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(std::string_view spec, const std::string& why) {
  throw PreconditionError("transform spec '" + std::string(spec) + "': " + why);
}

class Params {
 public:
  Params(std::string_view spec, std::map<std::string, std::string> kv)
      : spec_(spec), kv_(std::move(kv)) {}

  double number(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) fail(spec_, "missing parameter '" + key + "'");
    used_.insert(key);
    return parse_number(key, it->second);
  }

  std::optional<double> maybe_number(const std::string& key) {
    if (!kv_.count(key)) return std::nullopt;
    return number(key);
  }

  bool flag(const std::string& key, bool fallback) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    fail(spec_, "parameter '" + key + "' expects true/false, got '" + it->second + "'");
  }

  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) fail(spec_, "unknown parameter '" + k + "'");
    }
  }

 private:
  double parse_number(const std::string& key, const std::string& text) const {
    if (text == "inf") return kInf;
    if (text == "-inf") return -kInf;
    if (text == "e") return std::exp(1.0);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      fail(spec_, "parameter '" + key + "' is not a number: '" + text + "'");
    }
    return v;
  }

  std::string_view spec_;
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

Transform parse_impl(std::string_view full, std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) fail(full, "empty transform");

  // Split off a trailing parenthesized base.
  std::string head = s;
  std::string inner;
  bool has_base = false;
  if (s.back() == ')') {
    int depth = 0;
    std::size_t open = std::string::npos;
    for (std::size_t i = s.size(); i-- > 0;) {
      if (s[i] == ')') ++depth;
      if (s[i] == '(') {
        if (--depth == 0) {
          open = i;
          break;
        }
      }
    }
    if (open == std::string::npos) fail(full, "unbalanced parentheses");
    head = trim(std::string_view(s).substr(0, open));
    inner = s.substr(open + 1, s.size() - open - 2);
    has_base = true;
  }
  if (head.find_first_of("()") != std::string::npos) fail(full, "unexpected parenthesis in '" + head + "'");

  std::string name = head;
  std::map<std::string, std::string> kv;
  if (const auto colon = head.find(':'); colon != std::string::npos) {
    name = trim(std::string_view(head).substr(0, colon));
    std::string_view rest = std::string_view(head).substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail(full, "expected key=value, got '" + item + "'");
      const std::string key = trim(std::string_view(item).substr(0, eq));
      if (kv.count(key)) fail(full, "duplicate parameter '" + key + "'");
      kv[key] = trim(std::string_view(item).substr(eq + 1));
    }
  }

  Params params(full, std::move(kv));
  static const std::set<std::string> leaves = {"power", "powerstar", "logpower", "halflogk"};
  static const std::set<std::string> combos = {"affine", "reflect", "rescale", "restrict", "conjexp",
                                               "conjlog"};
  if (leaves.count(name) && has_base) fail(full, "'" + name + "' takes no base transform");
  if (combos.count(name) && !has_base) fail(full, "'" + name + "' needs a parenthesized base transform");

  auto build = [&]() -> Transform {
    if (name == "power") return Transform::power(params.number("p"));
    if (name == "powerstar") return Transform::power_star(params.number("p"));
    if (name == "logpower") return Transform::log_power(params.number("alpha"));
    if (name == "halflogk") {
      const auto log_k = params.maybe_number("logk");
      const double k = log_k ? std::exp(*log_k) : params.number("k");
      return Transform::scaled_half_log(k, params.flag("normalized", false));
    }
    const Transform base = parse_impl(full, inner);
    if (name == "affine") return combine(base, combinators::Affine{params.number("A"), params.number("B")});
    if (name == "reflect") return combine(base, combinators::Reflect{});
    if (name == "rescale") return combine(base, combinators::Rescale{params.number("lambda")});
    if (name == "restrict") {
      const double lo = params.number("lo");
      const double hi = params.number("hi");
      const bool lo_closed = params.flag("lo_closed", !std::isinf(lo));
      const bool hi_closed = params.flag("hi_closed", !std::isinf(hi));
      return combine(base, combinators::Restrict{Interval(lo, hi, lo_closed, hi_closed)});
    }
    if (name == "conjexp") return combine(base, combinators::ConjExp{});
    if (name == "conjlog") return combine(base, combinators::ConjLog{});
    fail(full, "unknown transform '" + name + "'");
  };
  Transform t = build();
  params.finish();
  return t;
}

}  // namespace

Transform parse_transform(std::string_view spec) { return parse_impl(spec, spec); }

}  // namespace fconc
