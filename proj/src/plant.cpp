#include "pidmap/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pidmap {

DisturbanceSignal DisturbanceSignal::constant(double value) {
  DisturbanceSignal s;
  s.kind_ = Kind::constant;
  s.offset_ = value;
  return s;
}

DisturbanceSignal DisturbanceSignal::sinusoid(double amplitude, double omega, double phase,
                                              double offset) {
  DisturbanceSignal s;
  s.kind_ = Kind::sinusoid;
  s.offset_ = offset;
  s.terms_ = {{amplitude, omega, phase}};
  return s;
}

DisturbanceSignal DisturbanceSignal::sum_of_sinusoids(std::vector<SinusoidTerm> terms,
                                                      double offset) {
  DisturbanceSignal s;
  s.kind_ = Kind::sum_of_sinusoids;
  s.offset_ = offset;
  s.terms_ = std::move(terms);
  return s;
}

DisturbanceSignal DisturbanceSignal::tabulated(std::vector<double> times,
                                               std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw std::invalid_argument("tabulated disturbance needs >= 2 matching (t, w) samples");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("tabulated disturbance times must be strictly increasing");
    }
  }

  DisturbanceSignal s;
  s.kind_ = Kind::tabulated;
  s.tab_t_ = std::move(times);
  s.tab_w_ = std::move(values);

  // Clamped cubic spline (zero slope at both ends) via the tridiagonal system
  // for the second derivatives m_i. The clamped ends make the constant
  // extension beyond the table C^1.
  const std::size_t n = s.tab_t_.size();
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  const auto& t = s.tab_t_;
  const auto& w = s.tab_w_;
  const double h0 = t[1] - t[0];
  b[0] = 2.0 * h0;
  c[0] = h0;
  r[0] = 6.0 * ((w[1] - w[0]) / h0 - 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = t[i] - t[i - 1];
    const double hr = t[i + 1] - t[i];
    a[i] = hl;
    b[i] = 2.0 * (hl + hr);
    c[i] = hr;
    r[i] = 6.0 * ((w[i + 1] - w[i]) / hr - (w[i] - w[i - 1]) / hl);
  }
  const double hn = t[n - 1] - t[n - 2];
  a[n - 1] = hn;
  b[n - 1] = 2.0 * hn;
  r[n - 1] = 6.0 * (0.0 - (w[n - 1] - w[n - 2]) / hn);

  // Thomas algorithm
  for (std::size_t i = 1; i < n; ++i) {
    const double f = a[i] / b[i - 1];
    b[i] -= f * c[i - 1];
    r[i] -= f * r[i - 1];
  }
  s.tab_m_.assign(n, 0.0);
  s.tab_m_[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    s.tab_m_[i] = (r[i] - c[i] * s.tab_m_[i + 1]) / b[i];
  }
  return s;
}

double DisturbanceSignal::value(double t) const {
  if (kind_ == Kind::tabulated) {
    if (t <= tab_t_.front()) return tab_w_.front();
    if (t >= tab_t_.back()) return tab_w_.back();
    auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - tab_t_.begin()) - 1;
    const double h = tab_t_[i + 1] - tab_t_[i];
    const double A = (tab_t_[i + 1] - t) / h;
    const double B = (t - tab_t_[i]) / h;
    return A * tab_w_[i] + B * tab_w_[i + 1] +
           ((A * A * A - A) * tab_m_[i] + (B * B * B - B) * tab_m_[i + 1]) * h * h / 6.0;
  }
  double v = offset_;
  for (const auto& term : terms_) {
    v += term.amplitude * std::sin(term.omega * t + term.phase);
  }
  return v;
}

double DisturbanceSignal::derivative(double t) const {
  if (kind_ == Kind::tabulated) {
    if (t <= tab_t_.front() || t >= tab_t_.back()) return 0.0;
    auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - tab_t_.begin()) - 1;
    const double h = tab_t_[i + 1] - tab_t_[i];
    const double A = (tab_t_[i + 1] - t) / h;
    const double B = (t - tab_t_[i]) / h;
    return (tab_w_[i + 1] - tab_w_[i]) / h +
           (-(3.0 * A * A - 1.0) * tab_m_[i] + (3.0 * B * B - 1.0) * tab_m_[i + 1]) * h / 6.0;
  }
  double v = 0.0;
  for (const auto& term : terms_) {
    v += term.amplitude * term.omega * std::cos(term.omega * t + term.phase);
  }
  return v;
}

ReferenceTrajectory::Point ReferenceTrajectory::eval(double t) const {
  Point p;
  p.q = offset;
  for (const auto& term : terms) {
    const double arg = term.omega * t + term.phase;
    const double s = std::sin(arg);
    const double c = std::cos(arg);
    const double w = term.omega;
    p.q += term.amplitude * s;
    p.qdot += term.amplitude * w * c;
    p.qddot += -term.amplitude * w * w * s;
    p.qdddot += -term.amplitude * w * w * w * c;
  }
  return p;
}

bool PlantParams::valid() const {
  return std::isfinite(a1) && std::isfinite(a2) && std::isfinite(b) && b > -1.0 && b < 1.0;
}

double lud(const PlantParams& params, double q, double qdot, double u, double t) {
  return params.a1 * q + params.a2 * qdot + params.b * u + params.w.value(t);
}

double lud_initial(const PlantParams& params, const PlantState& state0, double u0) {
  return lud(params, state0.q, state0.qdot, u0, 0.0);
}

double plant_rhs(const PlantParams& params, const PlantState& state, double u, double t) {
  return u + lud(params, state.q, state.qdot, u, t);
}

DisturbanceSignal disturbance_preset(std::string_view name, double scale) {
  constexpr double half_pi = std::numbers::pi / 2.0;  // sin(t + pi/2) = cos(t)
  if (name == "zero") return DisturbanceSignal::zero();
  if (name == "d1-elevation") return DisturbanceSignal::constant(0.345 * scale);
  if (name == "d2-elevation") return DisturbanceSignal::sinusoid(0.345 * scale, 1.0, half_pi);
  if (name == "d1-pitch") return DisturbanceSignal::constant(0.015 * scale);
  if (name == "d2-pitch") return DisturbanceSignal::sinusoid(0.015 * scale, 1.0, half_pi);
  throw std::invalid_argument("unknown disturbance preset: " + std::string(name));
}

ReferenceTrajectory trajectory_preset(std::string_view name) {
  if (name == "zero") return ReferenceTrajectory::zero();
  if (name == "heli-elevation") {
    return ReferenceTrajectory{
        .terms = {{5.73, 0.25, 0.0}, {5.73, 0.5, 0.0}},
        .offset = 5.73 * -0.33,
    };
  }
  if (name == "heli-pitch") {
    return ReferenceTrajectory{.terms = {{15.0, 0.63, 0.0}}, .offset = 0.0};
  }
  throw std::invalid_argument("unknown trajectory preset: " + std::string(name));
}

}  // namespace pidmap
