// End-to-end acceptance checks. Each check prints one [PASS]/[FAIL] line with
// its wall time; the exit status is the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "slglue/graph.hpp"
#include "slglue/kernel.hpp"
#include "slglue/lattice.hpp"
#include "slglue/lawlor.hpp"
#include "slglue/mesh.hpp"
#include "slglue/norms.hpp"
#include "slglue/schedule.hpp"
#include "slglue/sphere_rule.hpp"
#include "slglue/summation.hpp"

using namespace slglue;

namespace {

int failures = 0;

void run_check(int id, const std::string& label,
               const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s%s%s (%.2fs)\n", ok ? "PASS" : "FAIL", id,
                label.c_str(), detail.empty() ? "" : " -- ", detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

GluedMesh make_mesh(const std::shared_ptr<const Neck>& neck, double eps, int level,
                    double tau = 0.1) {
    GlueProfile profile;
    profile.eps = eps;
    profile.tau = tau;
    TorusLattice lattice = TorusLattice::cubic(3, 10.0, neck->phases().phi);
    MeshResolution res;
    res.sphere_level = level;
    return GluedMesh(profile, neck, lattice, res);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check_1() {
    run_check(1, "symmetric point: equal angles pi/3 and A = 4 pi, under 1s",
              [](std::string& detail) {
                  const auto t0 = std::chrono::steady_clock::now();
                  const PhaseData ph = phases_from_params(NeckParams{vec3(1, 1, 1)});
                  const double secs = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
                  double worst = 0.0;
                  for (int j = 0; j < 3; ++j)
                      worst = std::max(worst, std::abs(ph.phi[j] - M_PI / 3.0));
                  const double a_err = std::abs(ph.A - 4.0 * M_PI) / (4.0 * M_PI);
                  detail = "max|phi - pi/3| = " + fmt(worst) +
                           ", |A/4pi - 1| = " + fmt(a_err) + ", " + fmt(secs) + "s";
                  return worst <= 1e-8 && a_err <= 1e-13 && secs < 1.0;
              });
}

void check_2() {
    run_check(2, "parameter/angle bijection round-trips 20 random draws to 1e-6",
              [](std::string& detail) {
                  const auto t0 = std::chrono::steady_clock::now();
                  std::mt19937_64 rng(20259);
                  std::uniform_real_distribution<double> u(0.5, 2.0);
                  double worst = 0.0;
                  for (int k = 0; k < 20; ++k) {
                      const Eigen::VectorXd a = vec3(u(rng), u(rng), u(rng));
                      const PhaseData ph = phases_from_params(NeckParams{a});
                      const NeckParams back = params_from_phases(ph);
                      worst = std::max(
                          worst, ((back.a - a).cwiseAbs().array() / a.array())
                                     .maxCoeff());
                  }
                  const double secs = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
                  detail = "worst relative error = " + fmt(worst) + ", " +
                           fmt(secs) + "s";
                  return worst <= 1e-6 && secs < 10.0;
              });
}

void check_3() {
    run_check(3, "scaling laws for angles, A and the primitive gap to 1e-8",
              [](std::string& detail) {
                  std::mt19937_64 rng(333);
                  std::uniform_real_distribution<double> u(0.5, 2.0);
                  double worst = 0.0;
                  for (int k = 0; k < 10; ++k) {
                      const Eigen::VectorXd a = vec3(u(rng), u(rng), u(rng));
                      const double lambda = u(rng), eps = 0.5 * u(rng);
                      const PhaseData ph = phases_from_params(NeckParams{a});
                      const PhaseData phl =
                          phases_from_params(NeckParams{(lambda * a).eval()});
                      worst = std::max(worst,
                                       (phl.phi - ph.phi).cwiseAbs().maxCoeff());
                      worst = std::max(
                          worst, std::abs(phl.A - std::pow(lambda, -1.5) * ph.A) /
                                     ph.A);
                      const double c = neck_constant_value(NeckParams{a});
                      const double cd = neck_constant_value(
                          NeckParams{(a / (eps * eps)).eval()});
                      worst =
                          std::max(worst, std::abs(cd - eps * eps * c) / (eps * eps * c));
                  }
                  detail = "worst deviation = " + fmt(worst);
                  return worst <= 1e-8;
              });
}

void check_4() {
    run_check(
        4, "tangent frames: symplectic residual is O(h^2), angle spread <= 1e-4",
        [](std::string& detail) {
            const Neck neck(NeckParams{vec3(0.7, 1.3, 2.1)});
            const SpecialCheckReport coarse = special_check(neck, 40, 1e-3, 42);
            const SpecialCheckReport fine = special_check(neck, 40, 5e-4, 42);
            const double ratio = coarse.max_symplectic / fine.max_symplectic;
            detail = "halving ratio = " + fmt(ratio) +
                     ", angle spread = " + fmt(coarse.angle_spread);
            return ratio >= 2.5 && ratio <= 6.0 && coarse.angle_spread <= 1e-4;
        });
}

void check_5() {
    run_check(5, "end potential decays with exponent 2 - m within 10%",
              [](std::string& detail) {
                  const Neck neck(NeckParams{vec3(0.7, 1.3, 2.1)});
                  const Eigen::VectorXd sigma = vec3(1, 1, 1).normalized();
                  double worst = 0.0;
                  for (End end : {End::Minus, End::Plus}) {
                      std::vector<double> rs, vals;
                      for (int i = 0; i < 9; ++i) {
                          const double r = 10.0 * std::pow(10.0, i / 8.0);
                          rs.push_back(r);
                          vals.push_back(std::abs(neck.end_potential(end, sigma, r)));
                      }
                      worst = std::max(worst, std::abs(blowup_rate(rs, vals) + 1.0));
                  }
                  detail = "worst |slope + 1| = " + fmt(worst);
                  return worst <= 0.1;
              });
}

void check_6() {
    run_check(6, "chart seams agree to 1e-8 and the angle vanishes off the band",
              [](std::string& detail) {
                  auto neck = std::make_shared<Neck>(NeckParams{vec3(1, 1, 1)});
                  GluedMesh mesh = make_mesh(neck, 0.05, 3);
                  const GlueProfile& p = mesh.profile();
                  const double eps = p.eps;

                  const QuadratureRule sphere = sphere_rule(3, 3);
                  double seam = 0.0;
                  for (Eigen::Index i = 0; i < sphere.weights.size(); ++i) {
                      const Eigen::VectorXd sig = sphere.nodes.row(i).transpose();
                      for (End end : {End::Minus, End::Plus}) {
                          for (double mult :
                               {1.0 + 0.25 * p.hbar, 1.0 + 0.75 * p.hbar}) {
                              const double rr = eps * p.R1 * mult;
                              const Eigen::VectorXd chart =
                                  mesh.plane_chart(end, rr * sig);
                              const Eigen::VectorXcd gp =
                                  neck->graph_point(end, (rr / eps) * sig);
                              Eigen::VectorXd direct(6);
                              direct.head(3) = eps * gp.real();
                              direct.tail(3) = eps * gp.imag();
                              seam = std::max(
                                  seam, (chart - direct).cwiseAbs().maxCoeff());
                          }
                          // outer seam: the chart is exactly the flat plane
                          const double band_hi = 2.0 * std::pow(eps, p.tau);
                          for (double rr : {1.1 * band_hi, 1.5 * band_hi}) {
                              const Eigen::VectorXd chart =
                                  mesh.plane_chart(end, rr * sig);
                              Eigen::VectorXcd w(3);
                              for (int j = 0; j < 3; ++j)
                                  w[j] = std::complex<double>(rr * sig[j], 0.0);
                              const Eigen::VectorXcd flat =
                                  neck->end_rotation(end, w);
                              Eigen::VectorXd direct(6);
                              direct.head(3) = flat.real();
                              direct.tail(3) = flat.imag();
                              seam = std::max(
                                  seam, (chart - direct).cwiseAbs().maxCoeff());
                          }
                      }
                  }

                  mesh.compute_metric();
                  mesh.compute_theta();
                  double off_band = 0.0;
                  for (const auto& s : mesh.samples())
                      if (!s.band) off_band = std::max(off_band, std::abs(s.theta));
                  detail = "seam sup = " + fmt(seam) +
                           ", off-band sup|theta| = " + fmt(off_band);
                  return seam <= 1e-8 && off_band <= 1e-12;
              });
}

void check_7() {
    run_check(
        7, "sup|theta| scales as eps^{m(1-tau)} within 15% on meshes under 1e5",
        [](std::string& detail) {
            auto neck = std::make_shared<Neck>(NeckParams{vec3(1, 1, 1)});
            std::vector<double> eps_values = {0.1, 0.05, 0.025}, sups;
            long max_samples = 0;
            for (double eps : eps_values) {
                GluedMesh mesh = make_mesh(neck, eps, 6);
                max_samples = std::max(
                    max_samples, static_cast<long>(mesh.samples().size()));
                mesh.compute_metric();
                mesh.compute_theta();
                double sup = 0.0;
                for (const auto& s : mesh.samples())
                    sup = std::max(sup, std::abs(s.theta));
                sups.push_back(sup);
            }
            const double slope = blowup_rate(eps_values, sups);
            const double target = 3.0 * (1.0 - 0.1);
            detail = "slope = " + fmt(slope) + " vs " + fmt(target) +
                     ", samples = " + std::to_string(max_samples);
            return std::abs(slope - target) <= 0.15 * target &&
                   max_samples <= 100000;
        });
}

void check_8() {
    run_check(8, "matching constants: closed form and a random tree to 1e-12",
              [](std::string& detail) {
                  const double V1 = 2.0, V2 = 3.0, c = 1.7, rate = -1.0;
                  Eigen::VectorXd rates1(1);
                  rates1 << rate;
                  const Eigen::VectorXd C2 =
                      solve_constants(DesingGraph::torus(V1, V2, c), rates1);
                  double worst = std::abs(C2[0] + c * rate * V2 / (V1 + V2));
                  worst = std::max(worst, std::abs(C2[1] - c * rate * V1 / (V1 + V2)));
                  worst = std::max(worst, std::abs(V1 * C2[0] + V2 * C2[1]));

                  std::mt19937_64 rng(88);
                  std::uniform_real_distribution<double> u(0.5, 3.0);
                  DesingGraph g;
                  for (int b = 0; b < 5; ++b) g.vertices.push_back({b, u(rng)});
                  g.edges.push_back({0, 0, 1, u(rng)});
                  g.edges.push_back({1, 0, 2, u(rng)});
                  g.edges.push_back({2, 2, 3, u(rng)});
                  g.edges.push_back({3, 2, 4, u(rng)});
                  Eigen::VectorXd rates(4);
                  for (int j = 0; j < 4; ++j) rates[j] = -u(rng);
                  const Eigen::VectorXd C = solve_constants(g, rates);
                  const Eigen::MatrixXd B = incidence(g);
                  Eigen::VectorXd target(4);
                  for (int j = 0; j < 4; ++j) target[j] = g.edges[j].c * rates[j];
                  worst = std::max(
                      worst, (B.transpose() * C - target).cwiseAbs().maxCoeff());
                  double vmean = 0.0;
                  for (int b = 0; b < 5; ++b) vmean += g.vertices[b].volume * C[b];
                  worst = std::max(worst, std::abs(vmean));
                  detail = "worst residual = " + fmt(worst);
                  return worst <= 1e-12;
              });
}

void check_9() {
    run_check(9, "neck-size ODE tracks the closed form to 1e-8 on [L, 100L]",
              [](std::string& detail) {
                  NeckSchedule s;
                  s.m = 3;
                  s.c = 1.0;
                  s.Lambda = 1.0;
                  s.eps0 = matched_eps0(s.m, s.c, s.Lambda);
                  const OdePath path =
                      solve_balancing_ode(s, s.Lambda, 100.0 * s.Lambda, 1e-12);
                  double worst = 0.0;
                  for (std::size_t i = 0; i < path.times.size(); ++i) {
                      const double ec = closed_form(s, path.times[i]);
                      worst = std::max(
                          worst, std::abs(std::sqrt(path.values[i][0]) - ec) / ec);
                  }
                  const AssumptionReport rep = validate_assumption(
                      [&](double t) { return closed_form(s, t); },
                      [&](double t) { return closed_form_derivative(s, t); }, s.m,
                      s.Lambda, 100.0 * s.Lambda, 0.01);
                  detail = "max relative error = " + fmt(worst) + ", validator " +
                           (rep.finite ? "finite" : "infinite");
                  return worst <= 1e-8 && rep.finite;
              });
}

void check_10() {
    run_check(10, "curvature blow-up exponent 1/(m-2) within 5%",
              [](std::string& detail) {
                  auto neck = std::make_shared<Neck>(NeckParams{vec3(1, 1, 1)});
                  std::vector<double> times = {1.0, 2.0, 4.0}, sups;
                  for (double t : times) {
                      const double eps = 0.05 / t;  // eps ~ t^{-1/(m-2)}, m = 3
                      GluedMesh mesh = make_mesh(neck, eps, 3);
                      mesh.compute_metric();
                      mesh.compute_norm_a();
                      double sup = 0.0;
                      for (const auto& s : mesh.samples())
                          sup = std::max(sup, s.normA);
                      sups.push_back(sup);
                  }
                  const double slope = blowup_rate(times, sups);
                  detail = "slope = " + fmt(slope) + " vs 1";
                  return std::abs(slope - 1.0) <= 0.05;
              });
}

void check_11() {
    run_check(
        11,
        "projection residual drops by 2^{-(1+tau)m} within 30%; frozen band "
        "integrals reproduce +-eps^m A within 20%",
        [](std::string& detail) {
            auto neck = std::make_shared<Neck>(NeckParams{vec3(1, 1, 1)});
            const double A = neck->phases().A;
            const double c_L = neck->c_plus();

            auto band_sums = [](const GluedMesh& mesh, double& minus, double& plus) {
                std::vector<double> tm, tp;
                for (const auto& s : mesh.samples()) {
                    if (!s.band) continue;
                    const double v = s.theta * s.qweight * s.sqrt_det_g;
                    (s.region == Region::QMinus ? tm : tp).push_back(v);
                }
                minus = pairwise_sum(tm);
                plus = pairwise_sum(tp);
            };

            double ratio = 0.0;
            {
                std::vector<double> residuals;
                for (double eps : {0.05, 0.025}) {
                    GluedMesh mesh = make_mesh(neck, eps, 6);
                    const double coeff = NeckSchedule::coefficient(
                        A, c_L, mesh.V1(), mesh.V2());
                    const double deps2 = -coeff * std::pow(eps, 3);
                    residuals.push_back(
                        balancing_projection(mesh, deps2).residual);
                }
                ratio = std::abs(residuals[1]) / std::abs(residuals[0]);
            }
            const double ratio_target = std::pow(2.0, -(1.0 + 0.1) * 3.0);
            const bool ratio_ok = std::abs(ratio / ratio_target - 1.0) <= 0.3;

            GluedMesh frozen = make_mesh(neck, 0.05, 6);
            balancing_projection(frozen, 0.0);
            double band_minus = 0.0, band_plus = 0.0;
            band_sums(frozen, band_minus, band_plus);
            const double tip_target = std::pow(0.05, 3) * A;
            const bool signs_ok = band_minus < 0.0 && band_plus > 0.0;
            const bool mag_ok =
                std::abs(std::abs(band_minus) / tip_target - 1.0) <= 0.2 &&
                std::abs(std::abs(band_plus) / tip_target - 1.0) <= 0.2;

            detail = "residual ratio = " + fmt(ratio) + " vs " + fmt(ratio_target) +
                     "; band integrals = " + fmt(band_minus) + ", " +
                     fmt(band_plus) + " vs +-" + fmt(tip_target);
            return ratio_ok && signs_ok && mag_ok;
        });
}

void check_12() {
    run_check(
        12, "kernel elements: constant law is exact, normalization is orthonormal",
        [](std::string& detail) {
            auto neck = std::make_shared<Neck>(NeckParams{vec3(1, 1, 1)});
            GluedMesh mesh = make_mesh(neck, 0.05, 2);
            mesh.compute_metric();

            const double k = 2.5;
            const KernelElement constant =
                kernel_element(mesh, Eigen::Vector2d(k, k));
            double dev = 0.0;
            for (double v : constant.values) dev = std::max(dev, std::abs(v - k));
            dev = std::max({dev, std::abs(constant.outer_values[0] - k),
                            std::abs(constant.outer_values[1] - k)});

            const KernelElement w = normalize_kernel(
                mesh, kernel_element(mesh, Eigen::Vector2d(0.0, 1.0)));
            const std::vector<double> ones(mesh.samples().size(), 1.0);
            const double mean =
                project(mesh, w.values, ones, w.outer_values, {1.0, 1.0}) /
                (mesh.V1() + mesh.V2());
            double sup = 0.0;
            for (double v : w.values) sup = std::max(sup, std::abs(v));
            sup = std::max(
                {sup, std::abs(w.outer_values[0]), std::abs(w.outer_values[1])});
            detail = "constant deviation = " + fmt(dev) + ", normalized mean = " +
                     fmt(mean) + ", sup = " + fmt(sup);
            return dev <= 1e-15 && std::abs(mean) <= 1e-12 && sup <= 1.0 + 1e-9;
        });
}

void check_13() {
    run_check(13, "admissible constants pass for m = 3..6 and violations are named",
              [](std::string& detail) {
                  for (int m = 3; m <= 6; ++m)
                      if (!check_constants(example_constants(m), m).ok) {
                          detail = "reference tuple rejected at m = " +
                                   std::to_string(m);
                          return false;
                      }
                  struct Probe {
                      const char* name;
                      std::function<void(NormParams&)> tweak;
                  };
                  const std::vector<Probe> probes = {
                      {"nu", [](NormParams& p) { p.nu = 1.0; }},
                      {"alpha", [](NormParams& p) { p.alpha = 0.5; }},
                      {"tau", [](NormParams& p) { p.tau = 0.25; }},
                      {"mu", [](NormParams& p) { p.mu = 100.0; }},
                      {"zeta", [](NormParams& p) { p.zeta = 10.0; }},
                  };
                  for (const auto& probe : probes) {
                      NormParams p = example_constants(3);
                      probe.tweak(p);
                      const ConstantsReport rep = check_constants(p, 3);
                      if (rep.ok || rep.first_violation != probe.name) {
                          detail = std::string("probe '") + probe.name +
                                   "' flagged '" + rep.first_violation + "'";
                          return false;
                      }
                  }
                  detail = "4 tuples accepted, 5 boundary probes named correctly";
                  return true;
              });
}

}  // namespace

int main() {
    check_1();
    check_2();
    check_3();
    check_4();
    check_5();
    check_6();
    check_7();
    check_8();
    check_9();
    check_10();
    check_11();
    check_12();
    check_13();
    std::printf("%d of 13 checks failed\n", failures);
    return failures;
}
