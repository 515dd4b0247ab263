#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fconc/field.hpp"
#include "fconc/transform.hpp"

namespace fconc {

/// Slack of the F-concavity inequality at values f(x), f(m), f(y), with
/// m = (1 - mu) x + mu y:
///   F(f(m)) - (1 - mu) F(f(x)) - mu F(f(y)).
/// A -inf right side gives +inf (vacuous); a -inf left side against a
/// finite right side gives -inf.
double slack_values(const Transform& F, double fx, double fm, double fy, double mu);
double slack_values_extended(const Transform& F, double fx, double fm, double fy, double mu);

/// Slack at grid nodes. (1 - mu) x + mu y must itself be a node.
double slack(const Transform& F, const Field& f, std::size_t x_node, std::size_t y_node, double mu);
/// Same, addressing nodes by coordinates (matched to the grid within 1e-9 h).
double slack(const Transform& F, const Field& f, Point x, Point y, double mu);

struct Witness {
  std::size_t x_node = 0;
  std::size_t y_node = 0;
  std::size_t m_node = 0;
  Point x;
  Point y;
  double mu = 0.5;
  /// Slack after re-evaluation in 50-digit arithmetic.
  double slack = 0.0;
  /// Slack as first computed in double.
  double slack_working = 0.0;
  int dimension = 1;
};

enum class Verdict { certified_on_samples, violated };

struct ConcavityReport {
  Verdict verdict = Verdict::certified_on_samples;
  double min_slack = std::numeric_limits<double>::infinity();
  std::vector<Witness> witnesses;
  std::size_t n_triples = 0;
  /// Triples dropped because a node fell below the value floor.
  std::size_t n_skipped = 0;
  double tolerance = 0.0;
  int dimension = 1;

  bool certified() const { return verdict == Verdict::certified_on_samples; }
};

struct CheckOptions {
  double tolerance = 1e-9;
  /// Triples touching a node with f < value_floor are skipped.
  double value_floor = -std::numeric_limits<double>::infinity();
  std::size_t max_witnesses = 8;
  /// Largest index gap between x and y along any axis; empty means all pairs.
  std::optional<std::size_t> max_gap;
  bool verify_extended = true;
};

/// Midpoint check over every node pair with even index gaps on both axes
/// whose midpoint is an inside node. Throws DomainError naming the first node
/// whose value lies outside F's interval.
ConcavityReport check_f_concave(const Transform& F, const Field& f, const CheckOptions& opts);
ConcavityReport check_f_concave(const Transform& F, const Field& f, double tolerance = 1e-9);

/// Same sampling with slack f(m) - min(f(x), f(y)).
ConcavityReport check_quasiconcave(const Field& f, const CheckOptions& opts);
ConcavityReport check_quasiconcave(const Field& f, double tolerance = 1e-9);

std::string to_string(Verdict v);
void to_json(nlohmann::json& j, const Witness& w);
void to_json(nlohmann::json& j, const ConcavityReport& r);

/// Non-finite doubles become the strings "inf", "-inf", "nan".
nlohmann::json json_number(double v);

}  // namespace fconc
