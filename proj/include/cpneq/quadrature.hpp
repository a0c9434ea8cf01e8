#pragma once

// Adaptive quadrature: Gauss-Kronrod 21-point panels on smooth pieces and
// tanh-sinh (double exponential) panels on pieces that touch an integrable
// endpoint singularity. Semi-infinite ranges are mapped onto [0, 1).
//
// Integrands are called either as f(x) or, when they accept three doubles, as
// f(x, dist_left, dist_right) where the distances to the panel ends of the
// *original* interval are exact even when x itself rounds onto an endpoint.
// An integrand may return T or Sample<T>; the error carried by a Sample is
// accumulated into the result (nested integrals).
//
// Panel bookkeeping is deterministic: the panel list is kept in left-to-right
// order, the largest-error panel (leftmost on ties) is bisected, and sums run
// in list order, so results do not depend on whether nodes were evaluated
// concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cpneq/errors.hpp"

namespace cpneq::quad {

enum class RuleFamily { GaussKronrod, DoubleExponential };

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  long max_evaluations = 200000;
  // Mandatory panel boundaries, strictly inside (a, b).
  std::vector<double> split_points;
  // Inverse-square-root class singularities at the interval ends.
  bool left_singular = false;
  bool right_singular = false;
  // GaussKronrod: GK21 on smooth panels, tanh-sinh on flagged ones.
  // DoubleExponential: tanh-sinh everywhere.
  RuleFamily family = RuleFamily::GaussKronrod;
  bool adaptive_bisection = true;
  bool parallel = false;
  bool throw_on_failure = true;

  void validate(double a, double b) const {
    require(rel_tol > 0.0 && abs_tol > 0.0, ErrorKind::InvalidParameter,
            "quadrature tolerances must be positive");
    require(a < b, ErrorKind::InvalidParameter,
            "quadrature needs a < b");
    require(max_evaluations > 0, ErrorKind::InvalidParameter,
            "max_evaluations must be positive");
    for (double s : split_points)
      require(s > a && s < b, ErrorKind::InvalidParameter,
              "split point " + std::to_string(s) + " outside (" +
                  std::to_string(a) + ", " + std::to_string(b) + ")");
  }
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
  // Converged only down to the floating-point floor of the integrand, above
  // the requested tolerance.
  bool roundoff_limited = false;
};

template <class T>
struct Sample {
  T value{};
  double error = 0.0;
};

namespace detail {

// Magnitude of an integrand value; user value types supply abs() via ADL.
template <class T>
double mag(const T& v) {
  using std::abs;
  return static_cast<double>(abs(v));
}

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// QUADPACK qk21 abscissae and weights; odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745866380, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr double kDeTmax = 6.5;
inline constexpr int kDeMaxLevel = 8;
inline constexpr int kRoundoffStrikes = 10;

template <class R>
struct sample_traits {
  using value_type = R;
  static const R& value(const R& r) { return r; }
  static double error(const R&) { return 0.0; }
};

template <class T>
struct sample_traits<Sample<T>> {
  using value_type = T;
  static const T& value(const Sample<T>& s) { return s.value; }
  static double error(const Sample<T>& s) { return s.error; }
};

template <class F>
constexpr bool distance_aware =
    std::is_invocable_v<const F&, double, double, double>;

template <class F>
using raw_result_t =
    std::conditional_t<distance_aware<F>,
                       std::invoke_result<const F&, double, double, double>,
                       std::invoke_result<const F&, double>>;

template <class F>
using result_t = std::decay_t<typename raw_result_t<F>::type>;

template <class F>
using value_t = typename sample_traits<result_t<F>>::value_type;

struct Node {
  double x;
  double dist_left;
  double dist_right;
};

template <class F>
result_t<F> call(const F& f, const Node& n) {
  if constexpr (distance_aware<F>)
    return f(n.x, n.dist_left, n.dist_right);
  else
    return f(n.x);
}

// Evaluates f at every node; with parallel set the loop is shared across the
// OpenMP team. The first exception raised is rethrown after the loop.
template <class F>
void evaluate_batch(const F& f, const std::vector<Node>& nodes,
                    std::vector<result_t<F>>& out, bool parallel) {
  out.resize(nodes.size());
  const long n = static_cast<long>(nodes.size());
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic, 1) if (parallel && n > 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = call(f, nodes[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(cpneq_quadrature_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

template <class T>
struct Panel {
  double a;
  double b;
  // Distances of a and b from the ends of the whole interval; keep the
  // distance-aware calls exact near singular ends.
  double a_from_left;
  double b_from_right;
  bool left_singular;
  bool right_singular;
  T value{};
  double error = 0.0;
  double floor = 0.0;  // 50 eps * integral of |f|
  double propagated = 0.0;
  bool frozen = false;
};

template <class T>
bool uses_de(const Panel<T>& p, RuleFamily family) {
  return family == RuleFamily::DoubleExponential || p.left_singular ||
         p.right_singular;
}

// Maps a reference node of [-1, 1] with known complements onto a panel.
template <class T>
Node map_node(const Panel<T>& p, double, double from_left,
              double from_right) {
  // from_left = half*(1+xi), from_right = half*(1-xi), both exact.
  const double x = (from_left <= from_right) ? p.a + from_left : p.b - from_right;
  return {x, p.a_from_left + from_left, p.b_from_right + from_right};
}

template <class F>
void gk21_nodes(const Panel<value_t<F>>& p, std::vector<Node>& nodes) {
  const double half = 0.5 * (p.b - p.a);
  for (std::size_t j = 0; j < 10; ++j) {
    const double xi = kXgk[j];
    nodes.push_back(map_node(p, half, half * (1.0 - xi), half * (1.0 + xi)));
    nodes.push_back(map_node(p, half, half * (1.0 + xi), half * (1.0 - xi)));
  }
  nodes.push_back(map_node(p, half, half, half));
}

template <class F>
void gk21_reduce(Panel<value_t<F>>& p, const result_t<F>* fv) {
  using T = value_t<F>;
  using Tr = sample_traits<result_t<F>>;
  const double half = 0.5 * (p.b - p.a);
  const T fc = Tr::value(fv[20]);
  T resk = fc * kWgk[10];
  T resg{};
  double resabs = mag(fc) * kWgk[10];
  double propagated = Tr::error(fv[20]) * kWgk[10];
  for (std::size_t j = 0; j < 10; ++j) {
    const T f1 = Tr::value(fv[2 * j]);
    const T f2 = Tr::value(fv[2 * j + 1]);
    resk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
    resabs += (mag(f1) + mag(f2)) * kWgk[j];
    propagated += (Tr::error(fv[2 * j]) + Tr::error(fv[2 * j + 1])) * kWgk[j];
  }
  const T reskh = resk * 0.5;
  double resasc = mag(fc - reskh) * kWgk[10];
  for (std::size_t j = 0; j < 10; ++j)
    resasc += (mag(Tr::value(fv[2 * j]) - reskh) +
               mag(Tr::value(fv[2 * j + 1]) - reskh)) *
              kWgk[j];
  resasc *= mag(half);
  resabs *= mag(half);
  double err = mag((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  p.value = resk * half;
  p.error = err;
  p.floor = 50.0 * kEps * resabs;
  p.propagated = propagated * mag(half);
}

// tanh-sinh node at parameter t on the panel; returns false when the node is
// unusable (distance underflow or, for plain integrands, x on an endpoint).
template <class F>
bool de_node(const Panel<value_t<F>>& p, double t, Node& node, double& weight) {
  const double half = 0.5 * (p.b - p.a);
  const double s = 0.5 * kPi * std::sinh(t);
  const double as = mag(s);
  if (as > 350.0) return false;
  const double e2 = std::exp(-2.0 * as);
  const double comp = 2.0 * e2 / (1.0 + e2);  // 1 - |tanh s|
  const double ch = std::cosh(s);
  weight = half * 0.5 * kPi * std::cosh(t) / (ch * ch);
  const double near = half * comp;
  const double far = half * (2.0 - comp);
  if (!(near > 1e-300)) return false;
  node = (t >= 0.0) ? map_node(p, half, far, near) : map_node(p, half, near, far);
  if constexpr (!distance_aware<F>) {
    if (node.x <= p.a || node.x >= p.b) return false;
  }
  return weight > 0.0;
}

template <class F>
long de_panel(const F& f, Panel<value_t<F>>& p, const QuadratureSpec& spec,
              std::vector<Node>& nodes, std::vector<result_t<F>>& values) {
  using T = value_t<F>;
  using Tr = sample_traits<result_t<F>>;
  std::vector<double> weights;
  long evaluations = 0;
  T sum{};
  double abs_sum = 0.0;
  double prop_sum = 0.0;
  T previous{};
  double step = 1.0;
  for (int level = 0; level <= kDeMaxLevel; ++level) {
    nodes.clear();
    weights.clear();
    const long kmax = static_cast<long>(kDeTmax / step);
    for (long k = -kmax; k <= kmax; ++k) {
      if (level > 0 && k % 2 == 0) continue;
      Node node;
      double w;
      if (de_node<F>(p, static_cast<double>(k) * step, node, w)) {
        nodes.push_back(node);
        weights.push_back(w);
      }
    }
    evaluate_batch(f, nodes, values, spec.parallel);
    evaluations += static_cast<long>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += Tr::value(values[i]) * weights[i];
      abs_sum += mag(Tr::value(values[i])) * weights[i];
      prop_sum += Tr::error(values[i]) * weights[i];
    }
    const T estimate = sum * step;
    if (level >= 3) {
      const double diff = mag(estimate - previous);
      const double floor_err = 50.0 * kEps * abs_sum * step;
      p.value = estimate;
      p.error = std::max(diff, floor_err);
      p.floor = floor_err;
      p.propagated = prop_sum * step;
      if (p.error <= std::max(spec.abs_tol, spec.rel_tol * mag(estimate)))
        break;
    }
    previous = estimate;
    step *= 0.5;
  }
  return evaluations;
}

template <class F>
long evaluate_panels(const F& f, std::vector<Panel<value_t<F>>*>& todo,
                     const QuadratureSpec& spec) {
  std::vector<Node> nodes;
  std::vector<result_t<F>> values;
  long evaluations = 0;
  // GK panels share one batch.
  for (auto* p : todo)
    if (!uses_de(*p, spec.family)) gk21_nodes<F>(*p, nodes);
  if (!nodes.empty()) {
    evaluate_batch(f, nodes, values, spec.parallel);
    evaluations += static_cast<long>(nodes.size());
    std::size_t offset = 0;
    for (auto* p : todo)
      if (!uses_de(*p, spec.family)) {
        gk21_reduce<F>(*p, values.data() + offset);
        offset += 21;
      }
  }
  for (auto* p : todo)
    if (uses_de(*p, spec.family)) evaluations += de_panel(f, *p, spec, nodes, values);
  return evaluations;
}

template <class F>
QuadratureResult<value_t<F>> adaptive(const F& f, double a, double b,
                                      const QuadratureSpec& spec) {
  using T = value_t<F>;
  spec.validate(a, b);
  std::vector<double> cuts;
  cuts.push_back(a);
  std::vector<double> splits = spec.split_points;
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  cuts.insert(cuts.end(), splits.begin(), splits.end());
  cuts.push_back(b);

  std::vector<Panel<T>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel<T> p{};
    p.a = cuts[i];
    p.b = cuts[i + 1];
    p.a_from_left = cuts[i] - a;
    p.b_from_right = b - cuts[i + 1];
    p.left_singular = (i == 0) && spec.left_singular;
    p.right_singular = (i + 2 == cuts.size()) && spec.right_singular;
    panels.push_back(p);
  }
  std::vector<Panel<T>*> todo;
  for (auto& p : panels) todo.push_back(&p);
  QuadratureResult<T> result;
  result.evaluations = evaluate_panels(f, todo, spec);
  int roundoff_strikes = 0;

  for (;;) {
    T total{};
    double err = 0.0;
    double floor = 0.0;
    double propagated = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.error;
      floor += p.floor;
      propagated += p.propagated;
    }
    result.value = total;
    result.error_estimate = err + propagated;
    const double target = std::max(spec.abs_tol, spec.rel_tol * mag(total));
    if (err <= target) {
      result.converged = true;
      return result;
    }
    // Cancellation between panels can put the target below what double
    // arithmetic resolves; stop once every panel sits near its floor.
    if (err <= 2.0 * floor) {
      result.converged = true;
      result.roundoff_limited = true;
      return result;
    }
    std::size_t worst = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (!panels[i].frozen &&
          (worst == panels.size() || panels[i].error > panels[worst].error))
        worst = i;
    if (!spec.adaptive_bisection || worst == panels.size() ||
        result.evaluations >= spec.max_evaluations)
      break;
    const Panel<T> orig = panels[worst];
    const double mid = 0.5 * (orig.a + orig.b);
    if (!(mid > orig.a && mid < orig.b) ||
        (orig.b - orig.a) <= 8.0 * kEps * std::max(mag(orig.a), mag(orig.b))) {
      panels[worst].frozen = true;
      continue;
    }
    Panel<T> left = orig;
    Panel<T> right = orig;
    left.b = mid;
    left.b_from_right = orig.b_from_right + (orig.b - mid);
    left.right_singular = false;
    right.a = mid;
    right.a_from_left = orig.a_from_left + (mid - orig.a);
    right.left_singular = false;
    panels[worst] = left;
    panels.insert(panels.begin() + static_cast<long>(worst) + 1, right);
    std::vector<Panel<T>*> pair = {&panels[worst], &panels[worst + 1]};
    result.evaluations += evaluate_panels(f, pair, spec);
    // Bisection that leaves the value unchanged without reducing the error
    // means the integrand is noisy at this level.
    const T joined = panels[worst].value + panels[worst + 1].value;
    if (mag(orig.value - joined) <= 1e-5 * mag(joined) &&
        panels[worst].error + panels[worst + 1].error >= 0.99 * orig.error &&
        ++roundoff_strikes >= kRoundoffStrikes) {
      result.value = T{};
      double e = 0.0, pr = 0.0;
      for (const auto& p : panels) {
        result.value += p.value;
        e += p.error;
        pr += p.propagated;
      }
      result.error_estimate = e + pr;
      result.converged = true;
      result.roundoff_limited = true;
      return result;
    }
  }
  if (spec.throw_on_failure) {
    const double partial = [&] {
      if constexpr (std::is_same_v<T, double>) return result.value;
      else return mag(result.value);
    }();
    throw IntegrationError("no convergence after " +
                               std::to_string(result.evaluations) +
                               " evaluations on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           partial, result.error_estimate);
  }
  return result;
}

}  // namespace detail

// Integral of f over [a, b].
template <class F>
auto integrate_finite(const F& f, double a, double b, const QuadratureSpec& spec) {
  return detail::adaptive(f, a, b, spec);
}

// Integral of f over [a, inf) for |f(x)| <~ exp(-(x - a) / decay_scale).
// Uses x = a + decay_scale * t, t = -ln(1 - s), s in [0, 1).
template <class F>
auto integrate_semiinfinite(const F& f, double a, double decay_scale,
                            const QuadratureSpec& spec) {
  require(decay_scale > 0.0, ErrorKind::InvalidParameter,
          "decay_scale must be positive");
  QuadratureSpec mapped = spec;
  mapped.right_singular = true;
  mapped.split_points.clear();
  for (double x : spec.split_points) {
    require(x > a, ErrorKind::InvalidParameter,
            "split point must exceed the lower limit");
    const double s = -std::expm1(-(x - a) / decay_scale);
    if (s > 0.0 && s < 1.0) mapped.split_points.push_back(s);
  }
  auto g = [&f, a, decay_scale](double, double s, double one_minus_s) {
    const double t = s < 0.5 ? -std::log1p(-s) : -std::log(one_minus_s);
    const double dx = decay_scale * t;
    const double jac = decay_scale / one_minus_s;
    using R = detail::result_t<F>;
    using Tr = detail::sample_traits<R>;
    // x ~ 700 decay lengths out; the integrand has decayed to nothing
    if (!std::isfinite(jac)) return R{};
    R r;
    if constexpr (detail::distance_aware<F>)
      r = f(a + dx, dx, std::numeric_limits<double>::infinity());
    else
      r = f(a + dx);
    if constexpr (std::is_same_v<R, typename Tr::value_type>)
      return static_cast<R>(r * jac);
    else
      return R{r.value * jac, r.error * jac};
  };
  return detail::adaptive(g, 0.0, 1.0, mapped);
}

// Runs both rule families on the same problem. The double-exponential run is
// non-adaptive (fixed panels from split_points), so a kink or jump that has
// no split point shows up as a disagreement.
template <class F>
auto cross_validate(const F& f, double a, double b, const QuadratureSpec& spec) {
  QuadratureSpec gk = spec;
  gk.family = RuleFamily::GaussKronrod;
  QuadratureSpec de = spec;
  de.family = RuleFamily::DoubleExponential;
  de.adaptive_bisection = false;
  de.throw_on_failure = false;
  auto r_gk = detail::adaptive(f, a, b, gk);
  auto r_de = detail::adaptive(f, a, b, de);
  const double scale = std::max(detail::mag(r_gk.value), detail::mag(r_de.value));
  const double diff = detail::mag(r_gk.value - r_de.value);
  if (diff > std::max(10.0 * spec.rel_tol * scale, spec.abs_tol))
    throw Error(ErrorKind::CrossValidationError,
                "Gauss-Kronrod and double-exponential results differ by " +
                    std::to_string(diff) + " (scale " + std::to_string(scale) + ")");
  return std::make_pair(r_gk, r_de);
}

}  // namespace cpneq::quad
