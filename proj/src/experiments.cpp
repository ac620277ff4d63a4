#include "nlhho/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "nlhho/mesh_gen.hpp"

namespace nlhho {

double ExactSolutionCase::value(double t, const Eigen::Vector2d& p) const {
  const double x = p.x();
  return c1 * std::exp(-alpha() * t + 0.5 * x) *
             (2.0 * M_PI * std::cos(M_PI * x) + std::sin(M_PI * x)) +
         equilibrium_value(p);
}

Eigen::Vector2d ExactSolutionCase::gradient(double t,
                                            const Eigen::Vector2d& p) const {
  const double x = p.x();
  const double dx =
      c1 * std::exp(-alpha() * t + 0.5 * x) *
          (2.0 * M_PI * std::cos(M_PI * x) +
           (0.5 - 2.0 * M_PI * M_PI) * std::sin(M_PI * x)) +
      2.0 * c1 * M_PI * std::exp(x - 0.5);
  return {dx, 0.0};
}

double ExactSolutionCase::equilibrium_value(const Eigen::Vector2d& p) const {
  return 2.0 * c1 * M_PI * std::exp(p.x() - 0.5);
}

ProblemSpec ExactSolutionCase::problem(double dt, double t_final) const {
  ProblemSpec spec;
  const double lx_ = lx;
  spec.lambda = [lx_](const Eigen::Vector2d&) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m(0, 0) = lx_;
    m(1, 1) = 1.0;
    return m;
  };
  spec.phi = [](const Eigen::Vector2d& x) { return -x.x(); };
  ExactSolutionCase self = *this;
  spec.u_init = [self](const Eigen::Vector2d& x) { return self.value(0.0, x); };
  spec.dt_init = dt;
  spec.t_final = t_final;
  return spec;
}

ProblemSpec positivity_problem(double dt, double t_final) {
  ProblemSpec spec;
  spec.lambda = [](const Eigen::Vector2d&) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m(0, 0) = 0.8;
    m(1, 1) = 1.0;
    return m;
  };
  spec.phi = [](const Eigen::Vector2d& x) {
    return -((x.x() - 0.4) * (x.x() - 0.4) + (x.y() - 0.6) * (x.y() - 0.6));
  };
  spec.u_init = [](const Eigen::Vector2d& x) {
    const double dx = x.x() - 0.5, dy = x.y() - 0.5;
    return dx * dx + dy * dy < 0.04 ? 1e-3 : 1.0;
  };
  spec.dt_init = dt;
  spec.t_final = t_final;
  return spec;
}

ErrorReport convergence_study(int k, int levels, int base_n, double lx,
                              double c1, const NewtonConfig& newton) {
  if (levels < 1)
    throw std::runtime_error("convergence_study: need at least one level");
  ErrorReport report;
  report.k = k;

  ExactSolutionCase exact{.lx = lx, .c1 = c1};
  const double dt_base = 0.05 / std::pow(2.0, k + 2);

  for (int i = 0; i < levels; ++i) {
    const int n = base_n << i;
    const double dt = dt_base / std::pow(2.0, i * (k + 2));

    const Mesh mesh = gen_triangular(n);
    const HhoSpace space(mesh, k);
    const auto caches =
        build_operator_caches(space, exact.problem(dt, 0.1).lambda, {});

    double num_l2 = 0.0, den_l2 = 0.0;
    double num_g = 0.0, den_g = 0.0;
    double num_i = 0.0;

    const int cbs = space.cell_block_dim();
    StepObserver observer = [&](const StepRecord& rec,
                                const Eigen::VectorXd& l) {
      const double t = rec.time;
      const double dtn = rec.dt;
      for (int K = 0; K < mesh.n_cells(); ++K) {
        const auto& rule = space.cell_rule(K);
        const auto& vals = space.cell_values(K);
        const auto idx = space.local_to_global(K);
        Eigen::VectorXd lK(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
          lK(static_cast<int>(j)) = l(idx[j]);

        // Interpolation floor: projection of the exact profile at time t
        // onto the cell space (orthonormal basis, so plain moments).
        Eigen::VectorXd proj = Eigen::VectorXd::Zero(cbs);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const int qi = static_cast<int>(q);
          proj += rule.weights[q] * exact.value(t, rule.points[qi]) *
                  vals.col(qi);
        }

        for (std::size_t q = 0; q < rule.size(); ++q) {
          const int qi = static_cast<int>(q);
          const double w = rule.weights[q];
          const double ue = exact.value(t, rule.points[qi]);
          const double uh = std::exp(vals.col(qi).dot(lK.head(cbs)));
          num_l2 += dtn * w * (uh - ue) * (uh - ue);
          den_l2 += dtn * w * ue * ue;

          const Eigen::Vector2d ge = exact.gradient(t, rule.points[qi]);
          const Eigen::Vector2d gh = uh * (caches[K].gradient_at(qi) * lK);
          num_g += dtn * w * (gh - ge).squaredNorm();
          den_g += dtn * w * ge.squaredNorm();

          const double ui = vals.col(qi).dot(proj);
          num_i += dtn * w * (ui - ue) * (ui - ue);
        }
      }
    };

    const RunResult result =
        run(space, caches, exact.problem(dt, 0.1), newton, observer);
    if (!result.completed)
      throw std::runtime_error("convergence_study: run aborted at level " +
                               std::to_string(i) + ": " + result.error);

    ConvergenceRow row;
    row.n = n;
    row.h = mesh.h_max;
    row.dt = dt;
    row.err_l2 = std::sqrt(num_l2 / den_l2);
    row.err_grad = std::sqrt(num_g / den_g);
    row.err_interp = std::sqrt(num_i / den_l2);
    row.steps = static_cast<int>(result.history.size()) - 1;
    row.linear_solves = result.total_linear_solves;
    row.seconds = result.seconds;
    report.rows.push_back(row);
  }

  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    report.orders_l2.push_back(
        std::log2(report.rows[i].err_l2 / report.rows[i + 1].err_l2));
    report.orders_grad.push_back(
        std::log2(report.rows[i].err_grad / report.rows[i + 1].err_grad));
    report.orders_interp.push_back(
        std::log2(report.rows[i].err_interp / report.rows[i + 1].err_interp));
  }
  return report;
}

LongtimeReport longtime_study(const Mesh& mesh, int k, double lx, double dt,
                              double t_final, double fit_t0, double fit_t1,
                              const NewtonConfig& newton) {
  LongtimeReport report;
  report.k = k;
  if (fit_t0 < 0.0) fit_t0 = 0.2 * t_final;
  if (fit_t1 < 0.0) fit_t1 = 0.8 * t_final;
  report.fit_t0 = fit_t0;
  report.fit_t1 = fit_t1;

  ExactSolutionCase exact{.lx = lx, .c1 = 0.1};
  report.alpha = exact.alpha();

  const HhoSpace space(mesh, k);
  const ProblemSpec spec = exact.problem(dt, t_final);
  const auto caches = build_operator_caches(space, spec.lambda, spec.params);

  const RunResult result = run(space, caches, spec, newton);
  report.completed = result.completed;
  for (const auto& rec : result.history)
    report.decay.emplace_back(rec.time, rec.l1_dist);

  // Log-linear least-squares fit of the distance over the window.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  const double floor = 1e-14 * (result.history.empty()
                                    ? 1.0
                                    : result.history.front().mass);
  for (const auto& [t, d] : report.decay) {
    if (t < fit_t0 || t > fit_t1 || !(d > floor)) continue;
    const double y = std::log(d);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++m;
  }
  if (m >= 2) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    report.fitted_rate = -slope;
  }
  return report;
}

PositivityReport positivity_study(const Mesh& mesh, int k, double dt,
                                  double t_final, const NewtonConfig& newton) {
  PositivityReport report;
  report.k = k;

  const HhoSpace space(mesh, k);
  const ProblemSpec spec = positivity_problem(dt, t_final);
  const auto caches = build_operator_caches(space, spec.lambda, spec.params);

  double mincells = std::numeric_limits<double>::infinity();
  double minfaces = mincells, mincellQN = mincells, minfaceQN = mincells;

  const int cbs = space.cell_block_dim();
  const int fbs = space.face_block_dim();
  StepObserver observer = [&](const StepRecord&, const Eigen::VectorXd& l) {
    for (int K = 0; K < mesh.n_cells(); ++K) {
      const auto& rule = space.cell_rule(K);
      const auto& vals = space.cell_values(K);
      const Eigen::VectorXd lK = l.segment(space.cell_offset(K), cbs);
      double mean = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const int qi = static_cast<int>(q);
        const double u = std::exp(vals.col(qi).dot(lK));
        mean += rule.weights[q] * u;
        mincellQN = std::min(mincellQN, u);
      }
      mincells = std::min(mincells, mean / mesh.cell_area[K]);
    }
    for (int f = 0; f < mesh.n_faces(); ++f) {
      const auto& rule = space.face_rule(f);
      const auto& vals = space.face_values(f);
      const Eigen::VectorXd lf = l.segment(space.face_offset(f), fbs);
      double mean = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const int qi = static_cast<int>(q);
        const double u = std::exp(vals.col(qi).dot(lf));
        mean += rule.weights[q] * u;
        minfaceQN = std::min(minfaceQN, u);
      }
      minfaces = std::min(minfaces, mean / mesh.face_length[f]);
    }
  };

  const RunResult result = run(space, caches, spec, newton, observer);
  report.completed = result.completed;
  report.mincells = mincells;
  report.minfaces = minfaces;
  report.mincellQN = mincellQN;
  report.minfaceQN = minfaceQN;
  report.linear_solves = result.total_linear_solves;
  report.steps = static_cast<int>(result.history.size()) - 1;
  report.seconds = result.seconds;
  return report;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_history_csv(const std::string& path,
                       const std::vector<StepRecord>& history) {
  auto out = open_out(path);
  out << "time,dt,mass,entropy,dissipation,l1_dist,newton_iters,"
         "linear_solves\n";
  for (const auto& r : history)
    out << r.time << "," << r.dt << "," << r.mass << "," << r.entropy << ","
        << r.dissipation << "," << r.l1_dist << "," << r.newton_iters << ","
        << r.linear_solves << "\n";
}

void write_errors_csv(const std::string& path, const ErrorReport& report) {
  auto out = open_out(path);
  out << "n,h,dt,err_l2,order_l2,err_grad,order_grad,err_interp,"
         "order_interp,steps,linear_solves,seconds\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out << r.n << "," << r.h << "," << r.dt << "," << r.err_l2 << ",";
    if (i > 0) out << report.orders_l2[i - 1];
    out << "," << r.err_grad << ",";
    if (i > 0) out << report.orders_grad[i - 1];
    out << "," << r.err_interp << ",";
    if (i > 0) out << report.orders_interp[i - 1];
    out << "," << r.steps << "," << r.linear_solves << "," << r.seconds
        << "\n";
  }
}

void write_positivity_csv(const std::string& path,
                          const std::vector<PositivityReport>& rows) {
  auto out = open_out(path);
  out << "k,mincells,minfaces,mincellQN,minfaceQN,linear_solves,steps,"
         "seconds\n";
  for (const auto& r : rows)
    out << r.k << "," << r.mincells << "," << r.minfaces << ","
        << r.mincellQN << "," << r.minfaceQN << "," << r.linear_solves << ","
        << r.steps << "," << r.seconds << "\n";
}

void write_plot_data(const std::string& path,
                     const std::vector<std::pair<double, double>>& xy) {
  auto out = open_out(path);
  for (const auto& [x, y] : xy) out << x << " " << y << "\n";
}

}  // namespace nlhho
