#pragma once

// Numerical machinery behind the subadditivity lemma for f_alpha: the
// auxiliary functions g, l, h and m, sign scans over their claimed domains,
// critical-point contour searches and figure-data emission.
//
// Conventions used throughout (see docs/file-formats.md for the files):
//  - g(x, y) = f_alpha(x) + f_alpha(y) - f_alpha(sqrt(x^2 + y^2)), the
//    subadditivity margin; the lemma states g >= 0 on the quarter disk D.
//  - m(x) = 1 - f_alpha(x) - f_alpha(sqrt(1 - x^2)) = -g restricted to the
//    boundary arc x^2 + y^2 = 1; m <= 0 there.
//  - h(x) = dl/dx for l(x) = [Theta^(a-1) - Xi^(a-1)] /
//    (sqrt(1-x^2) [Xi^a + Theta^a]); h < 0 on D1 = [1, (sqrt13-1)/2] x (0,1)
//    and h > 0 on D2 = [(sqrt7-1)/2, 1] x (0,1), which makes l strictly
//    monotone on each band.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "reoa/measures.hpp"
#include "reoa/parallel.hpp"

namespace reoa {

/// Subadditivity margin of f_alpha on the quarter disk
/// D = {0 <= x, y <= 1, x^2 + y^2 <= 1}; non-negative there for lemma-range
/// alpha. Vanishes identically on the axes x = 0 and y = 0.
inline double g_alpha(double x, double y, const AlphaParam& alpha) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("g_alpha: (x, y) must lie in [0, 1]^2");
  }
  const double rr = x * x + y * y;
  if (rr > 1.0 + 1e-12) {
    throw std::domain_error("g_alpha: x^2 + y^2 must not exceed 1");
  }
  return f_alpha(x, alpha) + f_alpha(y, alpha) -
         f_alpha(std::min(std::sqrt(rr), 1.0), alpha);
}

/// l(x) = [Theta^(a-1) - Xi^(a-1)] / (sqrt(1-x^2) [Xi^a + Theta^a]) on (0,1).
inline double l_alpha(double x, const AlphaParam& alpha) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("l_alpha: x must lie in the open interval (0, 1)");
  }
  const double a = alpha.alpha;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  const double theta = 1.0 + s;
  const double xi = x * x / (1.0 + s);
  const double diff = std::pow(theta, a - 1.0) - std::pow(xi, a - 1.0);
  const double q = std::pow(xi, a) + std::pow(theta, a);
  return diff / (s * q);
}

/// h(x) = dl/dx, evaluated in closed form:
///   a x D^2 / ((1-x^2) Q^2) - (a-1) x P / ((1-x^2) Q) + x D / ((1-x^2)^{3/2} Q)
/// with D = Theta^(a-1) - Xi^(a-1), P = Theta^(a-2) + Xi^(a-2),
/// Q = Xi^a + Theta^a. Identically zero at alpha = 1, and
/// h(x -> 1) = 2 (a^3 - 4a + 3) / 3.
inline double h_alpha(double x, const AlphaParam& alpha) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("h_alpha: x must lie in the open interval (0, 1)");
  }
  const double a = alpha.alpha;
  const double s2 = (1.0 - x) * (1.0 + x);
  const double s = std::sqrt(s2);
  const double theta = 1.0 + s;
  const double xi = x * x / (1.0 + s);
  const double d = std::pow(theta, a - 1.0) - std::pow(xi, a - 1.0);
  const double p = std::pow(theta, a - 2.0) + std::pow(xi, a - 2.0);
  const double q = std::pow(xi, a) + std::pow(theta, a);
  return a * x * d * d / (s2 * q * q) - (a - 1.0) * x * p / (s2 * q) +
         x * d / (s2 * s * q);
}

/// Closed-form boundary value h(x -> 1) = 2 (a^3 - 4a + 3) / 3. Zero at
/// a = 1 and at a = (sqrt(13)-1)/2, negative in between, positive below 1.
inline double h_limit_x1(const AlphaParam& alpha) {
  const double a = alpha.alpha;
  return 2.0 * (a * a * a - 4.0 * a + 3.0) / 3.0;
}

/// Boundary-arc margin m(x) = 1 - f_alpha(x) - f_alpha(sqrt(1-x^2));
/// equals -g(x, sqrt(1-x^2)) and is non-positive for lemma-range alpha.
inline double m_alpha(double x, const AlphaParam& alpha) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("m_alpha: x must lie in [0, 1]");
  }
  const double y = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  return 1.0 - f_alpha(x, alpha) - f_alpha(std::min(y, 1.0), alpha);
}

struct GridPoint {
  double x = 0.0;
  double y = 0.0;  // second scan variable (y or alpha), when present
  double alpha = 0.0;
};

struct ScanReport {
  std::string function_id;
  std::string domain_id;
  double step = 0.0;
  double tolerance = 0.0;
  long points = 0;
  /// Smallest margin towards the claimed sign (>= -tolerance means pass).
  double min_margin = 0.0;
  GridPoint arg_min;
  long violations = 0;
  std::string file;

  bool passed() const { return violations == 0; }
};

enum class ScanFunction { g, h_d1, h_d2, m };

inline std::string scan_function_name(ScanFunction fn) {
  switch (fn) {
    case ScanFunction::g:
      return "g";
    case ScanFunction::h_d1:
      return "h-D1";
    case ScanFunction::h_d2:
      return "h-D2";
    case ScanFunction::m:
      return "m";
  }
  return "?";
}

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(n - 1);
  }
  return out;
}

inline std::vector<double> step_grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + step * 1e-9; v += step) {
    out.push_back(std::min(v, hi));
  }
  return out;
}

struct CsvWriter {
  std::ofstream out;

  explicit CsvWriter(const std::string& path) : out(path) {
    if (!out) {
      throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }

  void header(const std::string& line) { out << line << '\n'; }

  void row(std::initializer_list<double> values) {
    bool first = true;
    char buf[40];
    for (double v : values) {
      if (!first) {
        out << ',';
      }
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf;
      first = false;
    }
    out << '\n';
  }

  void close_checked(const std::string& path) {
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + path + "' failed");
    }
  }
};

}  // namespace detail

/// Evaluates one scan function over its claimed domain and counts sign
/// violations beyond the tolerance. `margin` is the value oriented so the
/// claim reads margin >= 0 (g claimed non-negative; h on D1 and m claimed
/// non-positive; h on D2 claimed non-negative). When `csv_path` is given the
/// per-point values are streamed to a CSV file.
inline ScanReport scan_sign(ScanFunction fn, double step, double tolerance,
                            const std::optional<std::string>& csv_path = {},
                            unsigned threads = 1) {
  if (!(step >= 1e-4 && step <= 1e-1)) {
    throw std::invalid_argument("scan_sign: step must lie in [1e-4, 1e-1]");
  }
  ScanReport report;
  report.function_id = scan_function_name(fn);
  report.step = step;
  report.tolerance = tolerance;
  report.min_margin = std::numeric_limits<double>::infinity();

  std::optional<detail::CsvWriter> csv;
  if (csv_path) {
    csv.emplace(*csv_path);
    report.file = *csv_path;
  }

  const auto update = [&report](double margin, GridPoint pt) {
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.arg_min = pt;
    }
    ++report.points;
    if (margin < -report.tolerance) {
      ++report.violations;
    }
  };

  switch (fn) {
    case ScanFunction::g: {
      // Quarter disk D, scanned for 21 alphas across the lemma range.
      report.domain_id = "D";
      const auto alphas = detail::linspace(kAlphaLemmaLo, kAlphaLemmaHi, 21);
      const auto xs = detail::step_grid(0.0, 1.0, step);
      if (csv) {
        csv->header("alpha,x,y,g");
      }
      // Row-partitioned evaluation; single-writer emission in row order.
      struct RowResult {
        double min_margin = std::numeric_limits<double>::infinity();
        GridPoint arg_min;
        long points = 0;
        long violations = 0;
        std::vector<double> values;
      };
      for (double a : alphas) {
        const AlphaParam alpha(a);
        std::vector<RowResult> rows(xs.size());
        parallel_for_indexed(
            xs.size(), threads, [&](std::size_t xi) {
              RowResult& row = rows[xi];
              const double x = xs[xi];
              for (double y : xs) {
                if (x * x + y * y > 1.0 + 1e-12) {
                  break;
                }
                const double v = g_alpha(x, std::min(y, 1.0), alpha);
                if (csv) {
                  row.values.push_back(y);
                  row.values.push_back(v);
                }
                ++row.points;
                if (v < -tolerance) {
                  ++row.violations;
                }
                if (v < row.min_margin) {
                  row.min_margin = v;
                  row.arg_min = {x, y, a};
                }
              }
            });
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
          const RowResult& row = rows[xi];
          report.points += row.points;
          report.violations += row.violations;
          if (row.min_margin < report.min_margin) {
            report.min_margin = row.min_margin;
            report.arg_min = row.arg_min;
          }
          if (csv) {
            for (std::size_t k = 0; k + 1 < row.values.size(); k += 2) {
              csv->row({a, xs[xi], row.values[k], row.values[k + 1]});
            }
          }
        }
      }
      break;
    }
    case ScanFunction::h_d1: {
      // D1 interior: 1 < alpha < (sqrt13-1)/2, 0 < x < 1; claim h <= 0.
      report.domain_id = "D1";
      const auto alphas = detail::step_grid(1.0 + step, kAlphaLemmaHi - step,
                                            step);
      const auto xs = detail::step_grid(step, 1.0 - step, step);
      if (csv) {
        csv->header("alpha,x,h");
      }
      for (double a : alphas) {
        const AlphaParam alpha(a);
        for (double x : xs) {
          const double v = h_alpha(x, alpha);
          if (csv) {
            csv->row({a, x, v});
          }
          update(-v, {x, 0.0, a});
        }
      }
      break;
    }
    case ScanFunction::h_d2: {
      // D2 interior: (sqrt7-1)/2 < alpha < 1, 0 < x < 1; claim h >= 0.
      report.domain_id = "D2";
      const auto alphas =
          detail::step_grid(kAlphaLemmaLo + step, 1.0 - step, step);
      const auto xs = detail::step_grid(step, 1.0 - step, step);
      if (csv) {
        csv->header("alpha,x,h");
      }
      for (double a : alphas) {
        const AlphaParam alpha(a);
        for (double x : xs) {
          const double v = h_alpha(x, alpha);
          if (csv) {
            csv->row({a, x, v});
          }
          update(v, {x, 0.0, a});
        }
      }
      break;
    }
    case ScanFunction::m: {
      // D3: lemma-range alpha, 0 <= x <= 1; claim m <= 0.
      report.domain_id = "D3";
      const auto alphas =
          detail::step_grid(kAlphaLemmaLo, kAlphaLemmaHi, step);
      const auto xs = detail::step_grid(0.0, 1.0, step);
      if (csv) {
        csv->header("alpha,x,m");
      }
      for (double a : alphas) {
        const AlphaParam alpha(a);
        for (double x : xs) {
          const double v = m_alpha(x, alpha);
          if (csv) {
            csv->row({a, x, v});
          }
          update(-v, {x, 0.0, a});
        }
      }
      break;
    }
  }

  if (csv) {
    csv->close_checked(*csv_path);
  }
  return report;
}

struct CriticalPointReport {
  std::string function_id;
  std::string domain_id;
  double step = 0.0;
  /// Zero-contour points of the two partials (central differences).
  std::vector<GridPoint> zeros_dx;
  std::vector<GridPoint> zeros_dalpha;
  /// Smallest distance between a d/dx zero and a d/dalpha zero.
  double min_pair_distance = 0.0;
  bool contours_intersect = false;  // any pair closer than one grid cell
};

namespace detail {

/// Zero crossings of `fd` along x for each alpha row, located by bisection
/// between sign changes of the central difference.
inline void contour_points(
    const std::function<double(double, double)>& partial,
    const std::vector<double>& xs, const std::vector<double>& alphas,
    bool sweep_x, std::vector<GridPoint>& out) {
  const auto& outer = sweep_x ? alphas : xs;
  const auto& inner = sweep_x ? xs : alphas;
  for (double o : outer) {
    double prev_t = inner[0];
    double prev_v = sweep_x ? partial(prev_t, o) : partial(o, prev_t);
    for (std::size_t i = 1; i < inner.size(); ++i) {
      const double t = inner[i];
      const double v = sweep_x ? partial(t, o) : partial(o, t);
      if (std::isfinite(prev_v) && std::isfinite(v) && prev_v * v < 0.0) {
        double lo = prev_t;
        double hi = t;
        double flo = prev_v;
        for (int it = 0; it < 40; ++it) {
          const double mid = (lo + hi) / 2.0;
          const double fm = sweep_x ? partial(mid, o) : partial(o, mid);
          if (flo * fm <= 0.0) {
            hi = mid;
          } else {
            lo = mid;
            flo = fm;
          }
        }
        const double root = (lo + hi) / 2.0;
        if (sweep_x) {
          out.push_back({root, 0.0, o});
        } else {
          out.push_back({o, 0.0, root});
        }
      }
      prev_t = t;
      prev_v = v;
    }
  }
}

}  // namespace detail

enum class CriticalFunction { h, m };

/// Locates the zero contours of the x- and alpha-partials (central finite
/// differences) on a grid and reports whether the two contours share a point
/// within one grid cell. For h the domain is the interior of D1; for m it is
/// D3, where the d/dx contour is expected at x = 1/sqrt(2) and d/dalpha at
/// x = 1/sqrt(2) is expected positive everywhere.
inline CriticalPointReport critical_point_scan(CriticalFunction fn,
                                               double step) {
  if (!(step > 0.0 && step <= 1e-2)) {
    throw std::invalid_argument(
        "critical_point_scan: grid step must lie in (0, 1e-2]");
  }
  CriticalPointReport report;
  report.step = step;
  const double fd_h = step / 4.0;  // central-difference half-width

  std::function<double(double, double)> value;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  if (fn == CriticalFunction::h) {
    report.function_id = "h";
    report.domain_id = "D1";
    value = [](double x, double a) { return h_alpha(x, AlphaParam(a)); };
    alpha_lo = 1.0 + step;
    alpha_hi = kAlphaLemmaHi - step;
  } else {
    report.function_id = "m";
    report.domain_id = "D3";
    value = [](double x, double a) { return m_alpha(x, AlphaParam(a)); };
    alpha_lo = kAlphaLemmaLo + step;
    alpha_hi = kAlphaLemmaHi - step;
  }

  const auto partial_x = [&, fd_h](double x, double a) {
    return (value(x + fd_h, a) - value(x - fd_h, a)) / (2.0 * fd_h);
  };
  const auto partial_alpha = [&, fd_h](double x, double a) {
    return (value(x, a + fd_h) - value(x, a - fd_h)) / (2.0 * fd_h);
  };

  const auto xs = detail::step_grid(2.0 * step, 1.0 - 2.0 * step, step);
  const auto alphas = detail::step_grid(alpha_lo, alpha_hi, step);

  detail::contour_points(partial_x, xs, alphas, true, report.zeros_dx);
  detail::contour_points(partial_alpha, xs, alphas, false,
                         report.zeros_dalpha);

  report.min_pair_distance = std::numeric_limits<double>::infinity();
  for (const GridPoint& p : report.zeros_dx) {
    for (const GridPoint& q : report.zeros_dalpha) {
      const double dx = p.x - q.x;
      const double da = p.alpha - q.alpha;
      report.min_pair_distance =
          std::min(report.min_pair_distance, std::hypot(dx, da));
    }
  }
  report.contours_intersect = report.min_pair_distance <= step;
  return report;
}

enum class FigureId { fig1a, fig1b, fig2, fig3, fig4, fig5, fig6, fig7 };

inline std::string figure_name(FigureId id) {
  switch (id) {
    case FigureId::fig1a:
      return "1a";
    case FigureId::fig1b:
      return "1b";
    case FigureId::fig2:
      return "2";
    case FigureId::fig3:
      return "3";
    case FigureId::fig4:
      return "4";
    case FigureId::fig5:
      return "5";
    case FigureId::fig6:
      return "6";
    case FigureId::fig7:
      return "7";
  }
  return "?";
}

inline std::optional<FigureId> parse_figure_id(const std::string& s) {
  if (s == "1a") return FigureId::fig1a;
  if (s == "1b") return FigureId::fig1b;
  if (s == "2") return FigureId::fig2;
  if (s == "3") return FigureId::fig3;
  if (s == "4") return FigureId::fig4;
  if (s == "5") return FigureId::fig5;
  if (s == "6") return FigureId::fig6;
  if (s == "7") return FigureId::fig7;
  return std::nullopt;
}

/// Writes the data behind one figure as a CSV file with a header row naming
/// the axes. Content is deterministic for a fixed step.
inline void emit_figure_data(FigureId id, const std::string& path,
                             double step = 1e-3) {
  detail::CsvWriter csv(path);
  switch (id) {
    case FigureId::fig1a:
    case FigureId::fig1b: {
      // Zero contours of the h partials over 0 < x < 1, 0 < alpha <= 2.
      const double grid = std::max(step, 5e-3);
      const auto xs = detail::step_grid(2.0 * grid, 1.0 - 2.0 * grid, grid);
      const auto alphas = detail::step_grid(2.0 * grid, 2.0, grid);
      const double fd_h = grid / 4.0;
      const auto value = [](double x, double a) {
        return h_alpha(x, AlphaParam(a));
      };
      std::vector<GridPoint> pts;
      if (id == FigureId::fig1a) {
        csv.header("x,alpha (zero contour of dh/dx)");
        detail::contour_points(
            [&](double x, double a) {
              return (value(x + fd_h, a) - value(x - fd_h, a)) / (2.0 * fd_h);
            },
            xs, alphas, true, pts);
      } else {
        csv.header("x,alpha (zero contour of dh/dalpha)");
        detail::contour_points(
            [&](double x, double a) {
              return (value(x, a + fd_h) - value(x, a - fd_h)) / (2.0 * fd_h);
            },
            xs, alphas, false, pts);
      }
      for (const GridPoint& p : pts) {
        csv.row({p.x, p.alpha});
      }
      break;
    }
    case FigureId::fig2: {
      csv.header("x,h (alpha = (sqrt(13)-1)/2)");
      const AlphaParam alpha(kAlphaLemmaHi);
      for (double x : detail::step_grid(step, 1.0 - step, step)) {
        csv.row({x, h_alpha(x, alpha)});
      }
      break;
    }
    case FigureId::fig3: {
      csv.header("alpha,h_limit_x1");
      for (double a : detail::step_grid(1.0, kAlphaLemmaHi, step)) {
        csv.row({a, h_limit_x1(AlphaParam(a))});
      }
      break;
    }
    case FigureId::fig4: {
      csv.header("x,h (alpha = (sqrt(7)-1)/2)");
      const AlphaParam alpha(kAlphaLemmaLo);
      for (double x : detail::step_grid(step, 1.0 - step, step)) {
        csv.row({x, h_alpha(x, alpha)});
      }
      break;
    }
    case FigureId::fig5: {
      // Root of dm/dx per alpha; a single root at x = 1/sqrt(2) is expected.
      csv.header("alpha,x (zero of dm/dx)");
      const double fd_h = 1e-6;
      const auto xs = detail::step_grid(0.01, 0.99, std::max(step, 1e-3));
      for (double a :
           detail::step_grid(kAlphaLemmaLo, kAlphaLemmaHi, std::max(step,
                                                                    1e-3))) {
        const AlphaParam alpha(a);
        std::vector<GridPoint> pts;
        detail::contour_points(
            [&](double x, double aa) {
              const AlphaParam ap(aa);
              return (m_alpha(x + fd_h, ap) - m_alpha(x - fd_h, ap)) /
                     (2.0 * fd_h);
            },
            xs, {a}, true, pts);
        for (const GridPoint& p : pts) {
          csv.row({a, p.x});
        }
      }
      break;
    }
    case FigureId::fig6: {
      csv.header("alpha,dm_dalpha (x = 1/sqrt(2))");
      const double x0 = 1.0 / std::numbers::sqrt2;
      const double fd_h = 1e-6;
      for (double a : detail::step_grid(kAlphaLemmaLo + fd_h,
                                        kAlphaLemmaHi - fd_h,
                                        std::max(step, 1e-3))) {
        const double d = (m_alpha(x0, AlphaParam(a + fd_h)) -
                          m_alpha(x0, AlphaParam(a - fd_h))) /
                         (2.0 * fd_h);
        csv.row({a, d});
      }
      break;
    }
    case FigureId::fig7: {
      csv.header("x,alpha,m");
      const double grid = std::max(step, 2e-3);
      for (double x : detail::step_grid(0.0, 1.0, grid)) {
        for (double a : detail::step_grid(kAlphaLemmaLo, kAlphaLemmaHi,
                                          grid)) {
          csv.row({x, a, m_alpha(x, AlphaParam(a))});
        }
      }
      break;
    }
  }
  csv.close_checked(path);
}

}  // namespace reoa
