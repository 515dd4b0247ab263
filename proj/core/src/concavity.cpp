#include "fconc/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fconc/errors.hpp"

namespace fconc {

namespace {

constexpr double kPosInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class T>
T combine_slack(const BasicExtended<T>& gx, const BasicExtended<T>& gm, const BasicExtended<T>& gy,
                const T& mu) {
  const T w0 = T(1) - mu;
  const bool x_dead = gx.is_minus_infinity() && w0 > 0;
  const bool y_dead = gy.is_minus_infinity() && mu > 0;
  if (x_dead || y_dead) return T(kPosInf);
  if (gm.is_minus_infinity()) return T(kNegInf);
  T rhs = T(0);
  if (w0 > 0) rhs += w0 * gx.value();
  if (mu > 0) rhs += mu * gy.value();
  return gm.value() - rhs;
}

void require_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw PreconditionError("mu must lie in [0, 1]");
}

std::string node_label(const Domain& d, std::size_t k) {
  std::ostringstream os;
  const Point p = d.point(k);
  os << "node " << k << " (x=" << p.x;
  if (d.dimension() == 2) os << ", y=" << p.y;
  os << ")";
  return os.str();
}

ExtendedReal eval_at_node(const Transform& F, const Field& f, std::size_t k) {
  const double v = f[k];
  if (!F.interval().contains(v)) {
    std::ostringstream os;
    os << "field value " << v << " at " << node_label(f.domain(), k) << " outside F interval "
       << F.interval().to_string();
    throw DomainError(os.str());
  }
  return F.eval(v);
}

std::optional<std::size_t> locate(const Domain& d, Point p) {
  const double h = d.hx();
  const double fi = (p.x - d.x_at(0)) / h;
  const double ri = std::round(fi);
  if (std::abs(fi - ri) > 1e-9 || ri < 0 || ri >= static_cast<double>(d.nx())) return std::nullopt;
  std::size_t j = 0;
  if (d.dimension() == 2) {
    const double fj = (p.y - d.y_at(0)) / d.hy();
    const double rj = std::round(fj);
    if (std::abs(fj - rj) > 1e-9 || rj < 0 || rj >= static_cast<double>(d.ny())) return std::nullopt;
    j = static_cast<std::size_t>(rj);
  } else if (p.y != 0.0) {
    return std::nullopt;
  }
  const std::size_t k = d.node(static_cast<std::size_t>(ri), j);
  if (!d.inside(k)) return std::nullopt;
  return k;
}

struct Candidate {
  double slack;
  std::uint64_t seq;
  std::size_t x, y, m;
};

bool worse(const Candidate& a, const Candidate& b) {
  return a.slack < b.slack || (a.slack == b.slack && a.seq < b.seq);
}

// Enumerates midpoint triples in a fixed order and keeps the K smallest
// slacks; ties go to the earlier triple.
struct Scan {
  std::vector<Candidate> heap;  // max-heap under `worse`
  double rest_min = kPosInf;
  double min_slack = kPosInf;
  std::size_t n_triples = 0;
  std::size_t n_skipped = 0;
};

template <class SlackFn>
Scan scan_triples(const Domain& d, const std::vector<char>& usable, const CheckOptions& opts,
                  SlackFn slack_of) {
  Scan sc;
  const std::size_t cap = std::max<std::size_t>(64, opts.max_witnesses);
  sc.heap.reserve(cap + 1);
  const std::size_t nx = d.nx();
  const std::size_t ny = d.ny();
  const std::size_t gap = opts.max_gap.value_or(std::max(nx, ny));
  std::uint64_t seq = 0;

  auto visit = [&](std::size_t p, std::size_t q, std::size_t m) {
    if (!d.inside(m)) return;
    if (!usable[p] || !usable[q] || !usable[m]) {
      ++sc.n_skipped;
      return;
    }
    ++sc.n_triples;
    const double s = slack_of(p, m, q);
    const Candidate c{s, seq++, p, q, m};
    sc.min_slack = std::min(sc.min_slack, s);
    if (sc.heap.size() < cap) {
      sc.heap.push_back(c);
      std::push_heap(sc.heap.begin(), sc.heap.end(), worse);
    } else if (worse(c, sc.heap.front())) {
      sc.rest_min = std::min(sc.rest_min, sc.heap.front().slack);
      std::pop_heap(sc.heap.begin(), sc.heap.end(), worse);
      sc.heap.back() = c;
      std::push_heap(sc.heap.begin(), sc.heap.end(), worse);
    } else {
      sc.rest_min = std::min(sc.rest_min, s);
    }
  };

  for (std::size_t jp = 0; jp < ny; ++jp) {
    for (std::size_t ip = 0; ip < nx; ++ip) {
      const std::size_t p = d.node(ip, jp);
      if (!d.inside(p)) continue;
      const std::size_t jq_end = std::min(ny - 1, jp + gap);
      for (std::size_t jq = jp; jq <= jq_end; jq += 2) {
        // same row: only pairs to the right; later rows: full even-offset band
        const std::size_t iq_begin = jq == jp ? ip + 2 : ip - std::min(ip, gap) / 2 * 2;
        const std::size_t iq_end = std::min(nx - 1, ip + gap);
        for (std::size_t iq = iq_begin; iq <= iq_end; iq += 2) {
          const std::size_t q = d.node(iq, jq);
          if (!d.inside(q)) continue;
          visit(p, q, d.node((ip + iq) / 2, (jp + jq) / 2));
        }
      }
    }
  }
  return sc;
}

using HighSlack = std::function<double(std::size_t, std::size_t, std::size_t)>;

ConcavityReport finish(const Domain& d, Scan sc, const CheckOptions& opts, const HighSlack& high) {
  ConcavityReport r;
  r.tolerance = opts.tolerance;
  r.dimension = d.dimension();
  r.n_triples = sc.n_triples;
  r.n_skipped = sc.n_skipped;
  r.min_slack = sc.min_slack;
  if (!(sc.min_slack < -opts.tolerance)) return r;

  std::sort(sc.heap.begin(), sc.heap.end(), worse);
  double reverified_min = kPosInf;
  std::vector<Witness> found;
  for (const Candidate& c : sc.heap) {
    Witness w;
    w.x_node = c.x;
    w.y_node = c.y;
    w.m_node = c.m;
    w.x = d.point(c.x);
    w.y = d.point(c.y);
    w.mu = 0.5;
    w.slack_working = c.slack;
    w.slack = high ? high(c.x, c.m, c.y) : c.slack;
    w.dimension = d.dimension();
    reverified_min = std::min(reverified_min, w.slack);
    if (w.slack < -opts.tolerance) found.push_back(w);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Witness& a, const Witness& b) { return a.slack < b.slack; });
  if (found.size() > opts.max_witnesses) found.resize(opts.max_witnesses);
  r.witnesses = std::move(found);
  r.min_slack = std::min(reverified_min, sc.rest_min);
  if (r.min_slack < -opts.tolerance) r.verdict = Verdict::violated;
  return r;
}

std::vector<char> usable_nodes(const Field& f, double floor) {
  std::vector<char> u(f.values().size(), 0);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = f.domain().inside(k) && f[k] >= floor;
  return u;
}

}  // namespace

double slack_values(const Transform& F, double fx, double fm, double fy, double mu) {
  require_mu(mu);
  return combine_slack(F.eval(fx), F.eval(fm), F.eval(fy), mu);
}

double slack_values_extended(const Transform& F, double fx, double fm, double fy, double mu) {
  require_mu(mu);
  const HighPrecision m(mu);
  const HighPrecision s =
      combine_slack(F.eval(HighPrecision(fx)), F.eval(HighPrecision(fm)), F.eval(HighPrecision(fy)), m);
  return static_cast<double>(s);
}

double slack(const Transform& F, const Field& f, std::size_t x_node, std::size_t y_node, double mu) {
  require_mu(mu);
  const Domain& d = f.domain();
  if (x_node >= d.size() || y_node >= d.size() || !d.inside(x_node) || !d.inside(y_node))
    throw PreconditionError("slack: node outside the domain");
  const Point px = d.point(x_node);
  const Point py = d.point(y_node);
  const Point pm{(1 - mu) * px.x + mu * py.x, (1 - mu) * px.y + mu * py.y};
  const auto m = locate(d, pm);
  if (!m) throw PreconditionError("slack: (1 - mu) x + mu y is not a grid node");
  return combine_slack(eval_at_node(F, f, x_node), eval_at_node(F, f, *m), eval_at_node(F, f, y_node), mu);
}

double slack(const Transform& F, const Field& f, Point x, Point y, double mu) {
  const auto kx = locate(f.domain(), x);
  const auto ky = locate(f.domain(), y);
  if (!kx || !ky) throw PreconditionError("slack: point is not an inside grid node");
  return slack(F, f, *kx, *ky, mu);
}

ConcavityReport check_f_concave(const Transform& F, const Field& f, const CheckOptions& opts) {
  const Domain& d = f.domain();
  std::vector<double> g(d.size(), 0.0);
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d.inside(k)) g[k] = eval_at_node(F, f, k).to_double();
  Scan sc = scan_triples(d, usable_nodes(f, opts.value_floor), opts,
                         [&g](std::size_t x, std::size_t m, std::size_t y) {
                           if (g[x] == kNegInf || g[y] == kNegInf) return kPosInf;
                           if (g[m] == kNegInf) return kNegInf;
                           return g[m] - (0.5 * g[x] + 0.5 * g[y]);
                         });
  HighSlack high;
  if (opts.verify_extended) {
    high = [&](std::size_t x, std::size_t m, std::size_t y) {
      return slack_values_extended(F, f[x], f[m], f[y], 0.5);
    };
  }
  return finish(d, std::move(sc), opts, high);
}

ConcavityReport check_f_concave(const Transform& F, const Field& f, double tolerance) {
  CheckOptions o;
  o.tolerance = tolerance;
  return check_f_concave(F, f, o);
}

ConcavityReport check_quasiconcave(const Field& f, const CheckOptions& opts) {
  const std::vector<double>& g = f.values();
  Scan sc = scan_triples(f.domain(), usable_nodes(f, opts.value_floor), opts,
                         [&g](std::size_t x, std::size_t m, std::size_t y) {
                           return g[m] - std::min(g[x], g[y]);
                         });
  return finish(f.domain(), std::move(sc), opts, {});
}

ConcavityReport check_quasiconcave(const Field& f, double tolerance) {
  CheckOptions o;
  o.tolerance = tolerance;
  return check_quasiconcave(f, o);
}

std::string to_string(Verdict v) {
  return v == Verdict::violated ? "violated" : "certified_on_samples";
}

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void to_json(nlohmann::json& j, const Witness& w) {
  auto coords = [&](Point p) {
    return w.dimension == 2 ? nlohmann::json::array({p.x, p.y}) : nlohmann::json::array({p.x});
  };
  j = {{"x", coords(w.x)},
       {"y", coords(w.y)},
       {"mu", w.mu},
       {"slack", json_number(w.slack)},
       {"slack_working", json_number(w.slack_working)}};
}

void to_json(nlohmann::json& j, const ConcavityReport& r) {
  j = {{"verdict", to_string(r.verdict)},
       {"min_slack", json_number(r.min_slack)},
       {"witnesses", r.witnesses},
       {"n_triples", r.n_triples},
       {"n_skipped", r.n_skipped},
       {"tolerance", r.tolerance}};
}

}  // namespace fconc
