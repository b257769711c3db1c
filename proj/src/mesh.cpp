#include "slglue/mesh.hpp"

#include <cmath>

#include "slglue/errors.hpp"
#include "slglue/sphere_rule.hpp"

namespace slglue {

namespace {

End end_of(Region region) {
    switch (region) {
        case Region::QMinus:
        case Region::Outer1:
            return End::Minus;
        case Region::QPlus:
        case Region::Outer2:
            return End::Plus;
        default:
            throw ConfigError("region has no associated end");
    }
}

Eigen::VectorXd stack_complex(const Eigen::VectorXcd& z) {
    const int m = static_cast<int>(z.size());
    Eigen::VectorXd out(2 * m);
    out.head(m) = z.real();
    out.tail(m) = z.imag();
    return out;
}

}  // namespace

double q_potential(const GlueProfile& profile, const Neck& neck, End end,
                   const Eigen::VectorXd& sigma, double frak_r) {
    if (!(frak_r > profile.eps * profile.R1) || !(frak_r < profile.R2))
        throw ConfigError("radius outside (eps*R1, R2)");
    const double c = 1.0 - cutoff_chi(std::pow(profile.eps, -profile.tau) * frak_r);
    if (c == 0.0) return 0.0;
    const double e2 = profile.eps * profile.eps;
    return c * e2 * neck.end_potential_closed(end, sigma, frak_r / profile.eps);
}

long MeshResolution::expected_samples(int sphere_nodes) const {
    const long radial = static_cast<long>(deep_panels + pre_panels + band_panels +
                                          flat_panels) * gauss;
    return sphere_nodes *
           (static_cast<long>(tip_panels) * gauss + 2 * (radial + outer_ring + 2));
}

GluedMesh::GluedMesh(GlueProfile profile, std::shared_ptr<const Neck> neck,
                     TorusLattice lattice, MeshResolution resolution)
    : profile_(std::move(profile)),
      neck_(std::move(neck)),
      lattice_(std::move(lattice)),
      res_(resolution) {
    profile_.validate();
    lattice_.validate();
    m_ = neck_->dim();
    if (profile_.m != m_ || lattice_.dim() != m_)
        throw ConfigError("dimension mismatch between profile, neck and lattice");
    if ((neck_->phases().phi - lattice_.phi).cwiseAbs().maxCoeff() > 1e-8)
        throw GeometryError("neck asymptotic angles do not match the lattice planes");
    if (lattice_.shortest_vector() <= 2.0 * profile_.R2)
        throw LatticeError("lattice too fine: meshed balls of radius R2 would overlap");
    build();
}

double GluedMesh::outer_volume(int component) const {
    const double vb = component == 1 ? V1() : V2();
    const double rr = (1.0 - profile_.hbar) * profile_.R2;
    return vb - sphere_area(m_) / m_ * std::pow(rr, m_);
}

Eigen::VectorXd GluedMesh::tip_point(double s, const Eigen::VectorXd& x) const {
    return profile_.eps * stack_complex(neck_->point(s, x).point);
}

double GluedMesh::scalar_potential(End end, const Eigen::VectorXd& plane_x) const {
    const double r = plane_x.norm();
    const double c = 1.0 - cutoff_chi(std::pow(profile_.eps, -profile_.tau) * r);
    if (c == 0.0) return 0.0;
    const double e2 = profile_.eps * profile_.eps;
    return c * e2 * neck_->end_potential_closed(end, plane_x / r, r / profile_.eps);
}

Eigen::VectorXd GluedMesh::plane_chart(End end, const Eigen::VectorXd& plane_x) const {
    const double r = plane_x.norm();
    const double eps = profile_.eps;
    const double t = std::pow(eps, -profile_.tau) * r;
    const double c = 1.0 - cutoff_chi(t);
    const double cd = -cutoff_chi_d1(t) * std::pow(eps, -profile_.tau);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(m_);
    if (c != 0.0 || cd != 0.0) {
        const Eigen::VectorXd sigma = plane_x / r;
        const auto gs = neck_->graph_sample(end, sigma, r / eps);
        const double c_end = end == End::Plus ? neck_->c_plus() : 0.0;
        const double ptl =
            eps * eps * (0.5 * (r / eps) * gs.radial_slope - neck_->beta(gs.s) + c_end);
        grad = cd * ptl * sigma + (c * eps) * gs.grad;
    }
    Eigen::VectorXcd w(m_);
    for (int j = 0; j < m_; ++j) w[j] = std::complex<double>(plane_x[j], grad[j]);
    return stack_complex(neck_->end_rotation(end, w));
}

Eigen::MatrixXd GluedMesh::sphere_tangent_basis(const Eigen::VectorXd& x) {
    const int m = static_cast<int>(x.size());
    Eigen::MatrixXd tang(m, m - 1);
    int col = 0;
    for (int j = 0; j < m && col < m - 1; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(m, j);
        v -= v.dot(x) * x;
        for (int c = 0; c < col; ++c) v -= v.dot(tang.col(c)) * tang.col(c);
        const double nv = v.norm();
        if (nv < 1e-6) continue;
        tang.col(col++) = v / nv;
    }
    if (col != m - 1) throw NumericError("failed to build a tangent basis");
    return tang;
}

Eigen::MatrixXd GluedMesh::neck_metric(double s, const Eigen::VectorXd& x,
                                       const Eigen::MatrixXd& tangent) const {
    Eigen::MatrixXcd frame(m_, m_);
    const auto& a = neck_->params().a;
    for (int j = 0; j < m_; ++j) {
        const double rho2 = 1.0 / a[j] + s * s;
        const std::complex<double> zj =
            std::polar(std::sqrt(rho2), neck_->psi(j, s));
        const std::complex<double> dz =
            zj * std::complex<double>(s / rho2, neck_->psi_derivative(j, s));
        frame(j, 0) = dz * x[j];
        for (int k = 0; k + 1 < m_; ++k) frame(j, k + 1) = zj * tangent(j, k);
    }
    Eigen::MatrixXd g(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            g(i, j) = (frame.col(i).adjoint() * frame.col(j))(0).real();
    return g;
}

void GluedMesh::build() {
    const QuadratureRule sphere = sphere_rule(m_, res_.sphere_level);
    const int n_dir = static_cast<int>(sphere.weights.size());
    Eigen::VectorXd gl_nodes, gl_weights;
    gauss_legendre(res_.gauss, gl_nodes, gl_weights);

    const double eps = profile_.eps;
    const double R1 = profile_.R1, R2 = profile_.R2, hbar = profile_.hbar;
    const double band_lo = std::pow(eps, profile_.tau);
    const double tip_edge = (1.0 + hbar) * R1;

    samples_.clear();
    samples_.reserve(res_.expected_samples(n_dir));

    auto panel_nodes = [&](double lo, double hi, auto&& emit) {
        for (int q = 0; q < res_.gauss; ++q) {
            const double u = 0.5 * (gl_nodes[q] + 1.0);
            emit(lo + (hi - lo) * u, 0.5 * (hi - lo) * gl_weights[q]);
        }
    };

    for (int d = 0; d < n_dir; ++d) {
        const Eigen::VectorXd dir = sphere.nodes.row(d).transpose();
        const double wd = sphere.weights[d];

        // tip: rays of the dilated neck out to projection radius (1+hbar)R1
        const double s_lo = neck_->ray_boundary_minus(dir, tip_edge);
        const double s_hi = -s_lo;
        for (int p = 0; p < res_.tip_panels; ++p) {
            const double a = s_lo + (s_hi - s_lo) * p / res_.tip_panels;
            const double b = s_lo + (s_hi - s_lo) * (p + 1) / res_.tip_panels;
            panel_nodes(a, b, [&](double s, double w) {
                MeshSample smp;
                smp.region = Region::Tip;
                smp.s = s;
                smp.x = dir;
                smp.qweight = wd * w;
                const auto np = neck_->point(s, dir);
                smp.ambient = lattice_.reduce(eps * stack_complex(np.point));
                smp.rho = weight_tip(profile_, np.point.norm());
                samples_.push_back(std::move(smp));
            });
        }

        // one family of radial panels per plane
        for (Region reg : {Region::QMinus, Region::QPlus}) {
            const End end = end_of(reg);
            auto add_q = [&](double frak_r, double w, bool probe) {
                MeshSample smp;
                smp.region = reg;
                smp.x = dir;
                smp.frak_r = frak_r;
                smp.r = kappa_inverse(profile_, frak_r);
                smp.qweight = probe ? 0.0 : wd * w;
                smp.band = frak_r > band_lo && frak_r < 2.0 * band_lo;
                smp.ambient = lattice_.reduce(plane_chart(end, frak_r * dir));
                smp.rho = weight_intermediate(profile_, smp.r);
                samples_.push_back(std::move(smp));
            };

            // overlap probes against the tip chart, weight 0
            add_q(eps * R1 * (1.0 + 0.25 * hbar), 0.0, true);
            add_q(eps * R1 * (1.0 + 0.75 * hbar), 0.0, true);

            // deep panels, geometric edges from the tip seam to the band
            const double deep_lo = eps * tip_edge, deep_hi = 0.5 * band_lo;
            for (int p = 0; p < res_.deep_panels; ++p) {
                const double a =
                    deep_lo * std::pow(deep_hi / deep_lo,
                                       static_cast<double>(p) / res_.deep_panels);
                const double b =
                    deep_lo * std::pow(deep_hi / deep_lo,
                                       static_cast<double>(p + 1) / res_.deep_panels);
                panel_nodes(a, b, [&](double rr, double w) { add_q(rr, w, false); });
            }
            for (int p = 0; p < res_.pre_panels; ++p) {
                const double a = 0.5 * band_lo * (1.0 + static_cast<double>(p) / res_.pre_panels);
                const double b =
                    0.5 * band_lo * (1.0 + static_cast<double>(p + 1) / res_.pre_panels);
                panel_nodes(a, b, [&](double rr, double w) { add_q(rr, w, false); });
            }
            for (int p = 0; p < res_.band_panels; ++p) {
                const double a = band_lo * (1.0 + static_cast<double>(p) / res_.band_panels);
                const double b =
                    band_lo * (1.0 + static_cast<double>(p + 1) / res_.band_panels);
                panel_nodes(a, b, [&](double rr, double w) { add_q(rr, w, false); });
            }
            const double flat_hi = (1.0 - hbar) * R2;
            for (int p = 0; p < res_.flat_panels; ++p) {
                const double a =
                    2.0 * band_lo + (flat_hi - 2.0 * band_lo) * p / res_.flat_panels;
                const double b = 2.0 * band_lo +
                                 (flat_hi - 2.0 * band_lo) * (p + 1) / res_.flat_panels;
                panel_nodes(a, b, [&](double rr, double w) { add_q(rr, w, false); });
            }

            // seam probes into the outer flat torus, weight 0
            const Region outer_reg = reg == Region::QMinus ? Region::Outer1 : Region::Outer2;
            for (int p = 0; p < res_.outer_ring; ++p) {
                const double rr = flat_hi + (R2 * (1.0 - 0.5 * hbar) - flat_hi) *
                                                (p + 1.0) / res_.outer_ring;
                MeshSample smp;
                smp.region = outer_reg;
                smp.x = dir;
                smp.frak_r = rr;
                smp.r = rr;
                smp.qweight = 0.0;
                smp.ambient = lattice_.reduce(plane_chart(end, rr * dir));
                smp.rho = weight_outer(profile_);
                samples_.push_back(std::move(smp));
            }
        }
    }
}

Eigen::VectorXd GluedMesh::ambient_of(const MeshSample& sample) const {
    if (sample.region == Region::Tip) return tip_point(sample.s, sample.x);
    return plane_chart(end_of(sample.region), sample.frak_r * sample.x);
}

Eigen::MatrixXd GluedMesh::jacobian(const MeshSample& sample, double h_rel) const {
    Eigen::MatrixXd J(2 * m_, m_);
    const Eigen::MatrixXd tang = sphere_tangent_basis(sample.x);
    if (sample.region == Region::Tip) {
        const double h = h_rel * (1.0 + std::abs(sample.s));
        J.col(0) =
            (tip_point(sample.s + h, sample.x) - tip_point(sample.s - h, sample.x)) /
            (2.0 * h);
        for (int k = 0; k + 1 < m_; ++k) {
            const Eigen::VectorXd xp = (sample.x + h_rel * tang.col(k)).normalized();
            const Eigen::VectorXd xn = (sample.x - h_rel * tang.col(k)).normalized();
            J.col(k + 1) = (tip_point(sample.s, xp) - tip_point(sample.s, xn)) /
                           (2.0 * h_rel);
        }
        return J;
    }
    const End end = end_of(sample.region);
    const double rr = sample.frak_r;
    const double h = h_rel * rr;
    for (int k = 0; k + 1 < m_; ++k) {
        const Eigen::VectorXd sp = (sample.x + h_rel * tang.col(k)).normalized();
        const Eigen::VectorXd sn = (sample.x - h_rel * tang.col(k)).normalized();
        J.col(k) = (plane_chart(end, rr * sp) - plane_chart(end, rr * sn)) / (2.0 * h_rel);
    }
    J.col(m_ - 1) =
        (plane_chart(end, (rr + h) * sample.x) - plane_chart(end, (rr - h) * sample.x)) /
        (2.0 * h);
    return J;
}

void GluedMesh::compute_metric(double h_rel) {
    for (auto& smp : samples_) {
        const Eigen::MatrixXd J = jacobian(smp, h_rel);
        smp.metric = J.transpose() * J;
        const double det = smp.metric.determinant();
        if (!(det > 0.0)) throw NumericError("degenerate chart Jacobian");
        smp.sqrt_det_g = std::sqrt(det);
    }
}

void GluedMesh::compute_theta(double h_rel) {
    for (auto& smp : samples_) {
        // off the transition band the chart coincides with an exact special
        // Lagrangian piece (rescaled neck, dilated end graph or flat plane),
        // so the branch-fixed angle is identically zero there; only the
        // cutoff annulus needs the numerical Hessian
        if (!smp.band) {
            smp.theta = 0.0;
            continue;
        }
        const End end = end_of(smp.region);
        const Eigen::VectorXd X = smp.frak_r * smp.x;
        const double h = h_rel * smp.frak_r;
        Eigen::MatrixXd hess(m_, m_);
        const double g0 = scalar_potential(end, X);
        for (int i = 0; i < m_; ++i) {
            const Eigen::VectorXd ei = Eigen::VectorXd::Unit(m_, i) * h;
            hess(i, i) = (scalar_potential(end, X + ei) - 2.0 * g0 +
                          scalar_potential(end, X - ei)) /
                         (h * h);
            for (int j = i + 1; j < m_; ++j) {
                const Eigen::VectorXd ej = Eigen::VectorXd::Unit(m_, j) * h;
                hess(i, j) = hess(j, i) =
                    (scalar_potential(end, X + ei + ej) - scalar_potential(end, X + ei - ej) -
                     scalar_potential(end, X - ei + ej) + scalar_potential(end, X - ei - ej)) /
                    (4.0 * h * h);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
        if (es.info() != Eigen::Success) throw NumericError("Hessian eigenvalue solve failed");
        double theta = 0.0;
        for (int i = 0; i < m_; ++i) theta += std::atan(es.eigenvalues()[i]);
        smp.theta = theta;
    }
}

void GluedMesh::compute_norm_a(double h_rel) {
    for (auto& smp : samples_) {
        const Eigen::MatrixXd tang = sphere_tangent_basis(smp.x);
        const bool tip = smp.region == Region::Tip;

        // coordinate chart around the sample
        auto F = [&](const Eigen::VectorXd& u) {
            if (tip) {
                Eigen::VectorXd x = smp.x;
                for (int k = 0; k + 1 < m_; ++k) x += u[k + 1] * tang.col(k);
                return tip_point(smp.s + u[0], x.normalized());
            }
            Eigen::VectorXd sig = smp.x;
            for (int k = 0; k + 1 < m_; ++k) sig += u[k] * tang.col(k);
            return plane_chart(end_of(smp.region),
                               (smp.frak_r + u[m_ - 1]) * sig.normalized());
        };
        Eigen::VectorXd hs = Eigen::VectorXd::Constant(m_, h_rel);
        if (tip)
            hs[0] = h_rel * (1.0 + std::abs(smp.s));
        else
            hs[m_ - 1] = h_rel * smp.frak_r;

        const Eigen::VectorXd f0 = F(Eigen::VectorXd::Zero(m_));
        Eigen::MatrixXd J(2 * m_, m_);
        std::vector<Eigen::MatrixXd> D(m_, Eigen::MatrixXd(2 * m_, m_));
        for (int i = 0; i < m_; ++i) {
            const Eigen::VectorXd ei = Eigen::VectorXd::Unit(m_, i) * hs[i];
            const Eigen::VectorXd fp = F(ei), fn = F(-ei);
            J.col(i) = (fp - fn) / (2.0 * hs[i]);
            D[i].col(i) = (fp - 2.0 * f0 + fn) / (hs[i] * hs[i]);
            for (int j = i + 1; j < m_; ++j) {
                const Eigen::VectorXd ej = Eigen::VectorXd::Unit(m_, j) * hs[j];
                const Eigen::VectorXd mixed =
                    (F(ei + ej) - F(ei - ej) - F(-ei + ej) + F(-ei - ej)) /
                    (4.0 * hs[i] * hs[j]);
                D[i].col(j) = mixed;
                D[j].col(i) = mixed;
            }
        }
        const Eigen::MatrixXd g = J.transpose() * J;
        const Eigen::MatrixXd ginv = g.inverse();
        // project second derivatives onto the normal space
        std::vector<Eigen::MatrixXd> H(m_);
        for (int i = 0; i < m_; ++i)
            H[i] = D[i] - J * (ginv * (J.transpose() * D[i]));
        double a2 = 0.0;
        for (int u = 0; u < m_; ++u)
            for (int v = 0; v < m_; ++v)
                for (int up = 0; up < m_; ++up)
                    for (int vp = 0; vp < m_; ++vp)
                        a2 += ginv(u, up) * ginv(v, vp) * H[u].col(v).dot(H[up].col(vp));
        smp.normA = std::sqrt(std::max(0.0, a2));
    }
}

}  // namespace slglue
