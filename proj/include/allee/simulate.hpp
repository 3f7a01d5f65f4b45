#pragma once

#include "allee/equilibria.hpp"
#include "allee/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace allee {

struct integration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
};

struct Sample {
  double t, x, y;
};

struct Trajectory {
  Params<double> params{};
  std::vector<Sample> samples;
  Tolerance tol;
  std::vector<Sample> events;  // section crossings, when requested
};

using Rhs = std::function<std::array<double, 2>(const std::array<double, 2>&)>;

inline Rhs model_rhs(const Params<double>& p) {
  return [p](const std::array<double, 2>& s) {
    auto v = vector_field(p, State<double>{s[0], s[1]});
    return std::array<double, 2>{v.x, v.y};
  };
}

// Dormand-Prince 5(4) with PI step control and the standard quartic dense output.
class Dopri5 {
 public:
  using Vec = std::array<double, 2>;

  struct Step {
    double t0, h;
    Vec y0, y1;
    std::array<Vec, 5> cont;  // dense-output coefficients
    Vec eval(double t) const {
      double th = (t - t0) / h, th1 = 1 - th;
      Vec r;
      for (int i = 0; i < 2; ++i)
        r[i] = cont[0][i] + th * (cont[1][i] + th1 * (cont[2][i] + th * (cont[3][i] + th1 * cont[4][i])));
      return r;
    }
  };

  Dopri5(Rhs f, Tolerance tol, bool clamp_axes = true) : f_(std::move(f)), tol_(tol), clamp_(clamp_axes) {}

  // Advances (t, y) by one accepted step, never past t_end.
  Step step(double& t, Vec& y, double t_end) {
    if (h_ <= 0) h_ = initial_step(t, y);
    Vec k1 = have_k1_ ? k1_ : f_(y);
    for (int attempt = 0;; ++attempt) {
      double h = std::min(h_, t_end - t);
      if (h < 1e-14 * std::max(1.0, std::abs(t)) || attempt > 200) {
        std::ostringstream os;
        os << std::setprecision(17) << "step size underflow at t=" << t << " state=(" << y[0] << "," << y[1] << ")";
        throw integration_error(os.str());
      }
      Vec k2 = f_(add(y, h, {a21 * k1[0], a21 * k1[1]}));
      Vec k3 = f_(comb(y, h, k1, a31, k2, a32));
      Vec k4 = f_(comb(y, h, k1, a41, k2, a42, k3, a43));
      Vec k5 = f_(comb(y, h, k1, a51, k2, a52, k3, a53, k4, a54));
      Vec k6 = f_(comb(y, h, k1, a61, k2, a62, k3, a63, k4, a64, k5, a65));
      Vec y1;
      for (int i = 0; i < 2; ++i) y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      Vec k7 = f_(y1);
      double err = 0;
      for (int i = 0; i < 2; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double sc = tol_.abs + tol_.rel * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / 2);
      if (!std::isfinite(err)) {
        h_ = h * 0.2;
        continue;
      }
      if (err <= 1.0) {
        double fac = err == 0 ? 5.0 : 0.9 * std::pow(err, -0.7 / 5) * std::pow(errold_, 0.4 / 5);
        fac = std::clamp(fac, 0.2, 5.0);
        if (rejected_) fac = std::min(fac, 1.0);
        errold_ = std::max(err, 1e-4);
        rejected_ = false;
        Step s;
        s.t0 = t;
        s.h = h;
        s.y0 = y;
        for (int i = 0; i < 2; ++i) {
          double ydiff = y1[i] - y[i];
          double bspl = h * k1[i] - ydiff;
          s.cont[0][i] = y[i];
          s.cont[1][i] = ydiff;
          s.cont[2][i] = bspl;
          s.cont[3][i] = ydiff - h * k7[i] - bspl;
          s.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        if (clamp_) {
          for (int i = 0; i < 2; ++i)
            if (std::abs(y1[i]) <= tol_.abs) y1[i] = 0;
        }
        s.y1 = y1;
        t += h;
        y = y1;
        k1_ = clamp_ ? f_(y1) : k7;
        have_k1_ = true;
        if (h >= h_ * 0.999 || t < t_end) h_ = h * fac;
        return s;
      }
      rejected_ = true;
      h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

 private:
  static Vec add(const Vec& y, double h, const Vec& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }
  template <class... R>
  static Vec comb(const Vec& y, double h, R... r) {
    Vec out = y;
    accum(out, h, r...);
    return out;
  }
  static void accum(Vec&, double) {}
  template <class... R>
  static void accum(Vec& out, double h, const Vec& k, double c, R... r) {
    out[0] += h * c * k[0];
    out[1] += h * c * k[1];
    accum(out, h, r...);
  }
  double initial_step(double, const Vec& y) {
    Vec f0 = f_(y);
    double d0 = 0, d1n = 0;
    for (int i = 0; i < 2; ++i) {
      double sc = tol_.abs + tol_.rel * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (f0[i] / sc) * (f0[i] / sc);
    }
    double h = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1n);
    return std::min(h, 0.1);
  }

  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  Rhs f_;
  Tolerance tol_;
  bool clamp_;
  double h_ = 0, errold_ = 1e-4;
  bool rejected_ = false;
  Vec k1_{};
  bool have_k1_ = false;
};

// Integrates the field from init over [0, horizon]. sample_dt > 0 records a
// uniform grid through dense output; otherwise every accepted step is kept.
inline Trajectory integrate_rhs(const Rhs& f, const State<double>& init, double horizon, Tolerance tol = {},
                                double sample_dt = 0) {
  if (!(horizon > 0)) throw std::domain_error("horizon must be positive");
  Trajectory tr;
  tr.tol = tol;
  Dopri5 solver(f, tol);
  double t = 0;
  Dopri5::Vec y{init.x, init.y};
  tr.samples.push_back({0, y[0], y[1]});
  double next = sample_dt;
  while (t < horizon) {
    auto s = solver.step(t, y, horizon);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) throw integration_error("state diverged");
    if (sample_dt > 0) {
      while (next <= t + 1e-12 * std::max(1.0, t) && next <= horizon) {
        auto v = next >= t ? y : s.eval(next);
        tr.samples.push_back({next, v[0], v[1]});
        next = sample_dt * std::round(next / sample_dt + 1);
      }
    } else {
      tr.samples.push_back({t, y[0], y[1]});
    }
  }
  return tr;
}

inline Trajectory integrate(const Params<double>& p, const State<double>& init, double horizon, Tolerance tol = {},
                            double sample_dt = 0) {
  if (init.x < 0 || init.y < 0) throw std::domain_error("initial state must lie in the closed first quadrant");
  auto tr = integrate_rhs(model_rhs(p), init, horizon, tol, sample_dt);
  tr.params = p;
  return tr;
}

// ---------------------------------------------------------------------------
// Boundedness: entry into {0 <= x < 1, y < eta + 1} and no later exit.

struct BoundednessReport {
  std::vector<bool> entered_gamma_region;
  std::vector<double> entry_times;  // NaN when never entered or exited later
  bool all_ok() const {
    return std::all_of(entered_gamma_region.begin(), entered_gamma_region.end(), [](bool b) { return b; });
  }
};

inline bool in_gamma(const Params<double>& p, double x, double y) { return x >= 0 && x < 1 && y >= 0 && y < p.eta + 1; }

inline BoundednessReport check_boundedness(const Params<double>& p, const std::vector<State<double>>& inits,
                                           double horizon, Tolerance tol = {}) {
  BoundednessReport rep;
  for (const auto& s0 : inits) {
    if (!(s0.x > 0 && s0.y > 0)) throw std::domain_error("boundedness check needs interior initial states");
    Dopri5 solver(model_rhs(p), tol);
    double t = 0;
    Dopri5::Vec y{s0.x, s0.y};
    std::optional<double> entry;
    if (in_gamma(p, y[0], y[1])) entry = 0.0;
    bool ok = true;
    while (t < horizon) {
      solver.step(t, y, horizon);
      bool inside = in_gamma(p, y[0], y[1]);
      if (inside && !entry) entry = t;
      if (!inside && entry) {
        ok = false;
        break;
      }
    }
    bool good = ok && entry.has_value();
    rep.entered_gamma_region.push_back(good);
    rep.entry_times.push_back(good ? *entry : std::numeric_limits<double>::quiet_NaN());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Poincare return map on a ray from an equilibrium.

struct ReturnResult {
  bool returned = false;
  double r = 0;       // radial coordinate of the return point
  double period = 0;  // return time
};

class ReturnMap {
 public:
  ReturnMap(Rhs f, State<double> center, double angle, Tolerance tol = {1e-12, 1e-12}, double horizon = 2000)
      : f_(std::move(f)), c_(center), dir_{std::cos(angle), std::sin(angle)}, tol_(tol), horizon_(horizon) {}

  State<double> point(double r) const { return {c_.x + r * dir_[0], c_.y + r * dir_[1]}; }

  ReturnResult operator()(double r) const {
    auto p0 = point(r);
    Dopri5::Vec y{p0.x, p0.y};
    auto v0 = f_(y);
    // Orientation of the crossing is that of the flow at the start point.
    double orient = cross(v0);
    ReturnResult out;
    if (orient == 0) return out;
    Dopri5 solver(f_, tol_, false);
    double t = 0;
    double s_prev = side(y);
    bool left = false;  // must leave the line before a return counts
    while (t < horizon_) {
      auto st = solver.step(t, y, horizon_);
      double s_now = side(y);
      if (!left) {
        if (std::abs(s_now) > 0 && st.t0 + st.h > 0) left = true;
        s_prev = s_now;
        continue;
      }
      bool crossed = orient > 0 ? (s_prev < 0 && s_now >= 0) : (s_prev > 0 && s_now <= 0);
      if (crossed) {
        double lo = st.t0, hi = st.t0 + st.h;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          double mid = 0.5 * (lo + hi);
          double sm = side(st.eval(mid));
          bool before = orient > 0 ? sm < 0 : sm > 0;
          (before ? lo : hi) = mid;
        }
        auto q = st.eval(0.5 * (lo + hi));
        double along = (q[0] - c_.x) * dir_[0] + (q[1] - c_.y) * dir_[1];
        if (along > 0) {
          out.returned = true;
          out.r = along;
          out.period = 0.5 * (lo + hi);
          return out;
        }
      }
      s_prev = s_now;
    }
    return out;
  }

 private:
  double side(const Dopri5::Vec& y) const { return dir_[0] * (y[1] - c_.y) - dir_[1] * (y[0] - c_.x); }
  double cross(const Dopri5::Vec& v) const { return dir_[0] * v[1] - dir_[1] * v[0]; }

  Rhs f_;
  State<double> c_;
  std::array<double, 2> dir_;
  Tolerance tol_;
  double horizon_;
};

enum class CycleStability { Attracting, Repelling };

struct LimitCycle {
  State<double> section_point;
  double radius = 0;
  double period = 0;
  CycleStability stability = CycleStability::Attracting;
  double floquet_slope = 0;
  double residual = 0;
};

struct CycleScan {
  std::vector<double> radii;
  std::vector<std::optional<double>> displacement;  // P(r) - r, empty when non-returning
  std::vector<LimitCycle> cycles;
};

inline CycleScan find_limit_cycles(const Params<double>& p, const State<double>& center, double ray_angle,
                                   const std::vector<double>& radii, double horizon = 2000,
                                   Tolerance tol = {1e-12, 1e-12}) {
  if (!std::is_sorted(radii.begin(), radii.end())) throw std::invalid_argument("radii must be sorted ascending");
  ReturnMap P(model_rhs(p), center, ray_angle, tol, horizon);
  CycleScan scan;
  scan.radii = radii;
  for (double r : radii) {
    auto res = P(r);
    scan.displacement.push_back(res.returned ? std::optional<double>(res.r - r) : std::nullopt);
  }
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!scan.displacement[i] || !scan.displacement[i + 1]) continue;
    double da = *scan.displacement[i], db = *scan.displacement[i + 1];
    if (da == 0 || (da > 0) == (db > 0)) continue;
    double lo = radii[i], hi = radii[i + 1];
    double dlo = da;
    bool ok = true;
    for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      auto res = P(mid);
      if (!res.returned) {
        ok = false;
        break;
      }
      double dm = res.r - mid;
      if ((dm > 0) == (dlo > 0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    if (!ok) continue;
    double r = 0.5 * (lo + hi);
    auto fix = P(r);
    double eps = std::max(1e-7, 1e-5 * r);
    auto rp = P(r + eps), rm = P(r - eps);
    LimitCycle lc;
    lc.radius = r;
    lc.section_point = P.point(r);
    lc.period = fix.period;
    lc.residual = std::abs(fix.r - r);
    if (rp.returned && rm.returned) lc.floquet_slope = (rp.r - rm.r) / (2 * eps);
    lc.stability = da > 0 ? CycleStability::Attracting : CycleStability::Repelling;
    scan.cycles.push_back(lc);
  }
  return scan;
}

// Least-squares fit d(r) ~ c3 r^3 + c4 r^4 of the return-map displacement.
inline std::array<double, 2> fit_displacement_cubic(const std::vector<double>& r, const std::vector<double>& d) {
  double s66 = 0, s67 = 0, s77 = 0, b6 = 0, b7 = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double u = r[i] * r[i] * r[i], v = u * r[i];
    s66 += u * u;
    s67 += u * v;
    s77 += v * v;
    b6 += u * d[i];
    b7 += v * d[i];
  }
  double det = s66 * s77 - s67 * s67;
  return {(b6 * s77 - b7 * s67) / det, (s66 * b7 - s67 * b6) / det};
}

// ---------------------------------------------------------------------------
// Phase portraits.

struct Window {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

struct SeedResult {
  State<double> seed;
  bool ok = true;
  std::string error;
  Trajectory traj;
};

struct MarkedPoint {
  std::string label;
  State<double> at;
  std::string kind;
};

struct PortraitData {
  Params<double> params{};
  Window window;
  std::vector<SeedResult> seeds;
  std::vector<MarkedPoint> equilibria;
  std::vector<std::vector<State<double>>> prey_nullclines, predator_nullclines;
};

inline PortraitData phase_portrait(const Params<double>& p, const Window& w, int nx, int ny, double horizon,
                                   Tolerance tol = {1e-8, 1e-8}, double sample_dt = 0.05,
                                   const std::vector<MarkedPoint>& equilibria = {}) {
  if (!(w.xmax > w.xmin && w.ymax > w.ymin) || w.xmin < 0 || w.ymin < 0)
    throw std::domain_error("portrait window must be a nonempty rectangle in the first quadrant");
  PortraitData out;
  out.params = p;
  out.window = w;
  out.equilibria = equilibria;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      State<double> s{w.xmin + (i + 0.5) * (w.xmax - w.xmin) / nx, w.ymin + (j + 0.5) * (w.ymax - w.ymin) / ny};
      SeedResult sr;
      sr.seed = s;
      try {
        sr.traj = integrate(p, s, horizon, tol, sample_dt);
      } catch (const std::exception& ex) {
        sr.ok = false;
        sr.error = ex.what();
      }
      out.seeds.push_back(std::move(sr));
    }
  // Nullclines: x = 0 and y = ((1-x) - b/(x+a))/g; y = 0 and y = x + eta.
  const int n = 400;
  std::vector<State<double>> curve;
  for (int k = 0; k <= n; ++k) {
    double x = w.xmin + (w.xmax - w.xmin) * k / n;
    double y = ((1 - x) - p.beta / (x + p.alpha)) / p.gamma;
    if (y >= w.ymin && y <= w.ymax) {
      curve.push_back({x, y});
    } else if (!curve.empty()) {
      out.prey_nullclines.push_back(curve);
      curve.clear();
    }
  }
  if (!curve.empty()) out.prey_nullclines.push_back(curve);
  out.prey_nullclines.push_back({{0, w.ymin}, {0, w.ymax}});
  std::vector<State<double>> pred;
  for (int k = 0; k <= n; ++k) {
    double x = w.xmin + (w.xmax - w.xmin) * k / n;
    double y = x + p.eta;
    if (y >= w.ymin && y <= w.ymax) pred.push_back({x, y});
  }
  if (!pred.empty()) out.predator_nullclines.push_back(pred);
  out.predator_nullclines.push_back({{w.xmin, 0}, {w.xmax, 0}});
  return out;
}

inline void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x,y\n";
  os << std::setprecision(17);
  for (const auto& s : tr.samples) os << s.t << ',' << s.x << ',' << s.y << '\n';
}

inline std::string render_svg(const PortraitData& d, int size = 640) {
  const double pad = 40, W = size, H = size;
  auto X = [&](double x) { return pad + (x - d.window.xmin) / (d.window.xmax - d.window.xmin) * (W - 2 * pad); };
  auto Y = [&](double y) { return H - pad - (y - d.window.ymin) / (d.window.ymax - d.window.ymin) * (H - 2 * pad); };
  auto inside = [&](const State<double>& s) {
    return s.x >= d.window.xmin && s.x <= d.window.xmax && s.y >= d.window.ymin && s.y <= d.window.ymax;
  };
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto poly = [&](const std::vector<State<double>>& pts, const char* style) {
    if (pts.size() < 2) return;
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& s : pts)
      if (inside(s)) os << X(s.x) << ',' << Y(s.y) << ' ';
    os << "\"/>\n";
  };
  for (const auto& c : d.prey_nullclines) poly(c, "stroke=\"#c03030\" stroke-dasharray=\"6,4\"");
  for (const auto& c : d.predator_nullclines) poly(c, "stroke=\"#3050c0\" stroke-dasharray=\"6,4\"");
  for (const auto& s : d.seeds) {
    if (!s.ok) continue;
    std::vector<State<double>> pts;
    for (const auto& q : s.traj.samples) pts.push_back({q.x, q.y});
    poly(pts, "stroke=\"#404040\" stroke-width=\"0.8\"");
  }
  for (const auto& e : d.equilibria) {
    if (!inside(e.at)) continue;
    os << "<circle cx=\"" << X(e.at.x) << "\" cy=\"" << Y(e.at.y) << "\" r=\"4\" fill=\"black\"/>\n";
    os << "<text x=\"" << X(e.at.x) + 6 << "\" y=\"" << Y(e.at.y) - 6 << "\" font-size=\"12\">" << e.label
       << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\">x</text>\n";
  os << "<text x=\"8\" y=\"" << H / 2 << "\" font-size=\"12\">y</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace allee
