#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bladeopt/core/error.hpp"
#include "bladeopt/structures/section.hpp"

namespace bladeopt {

// Beam cross-section data in the rotor frame: X edgewise (direction of
// rotation), Y flapwise (downwind), z along the span. Offsets are measured
// from the pitch axis.
struct BeamSection {
    double radius = 0.0;
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();  // int E [1 X Y]^T [1 X Y] dA
    double GJ = 0.0;
    double mass_per_length = 0.0;
    Eigen::Vector2d mass_center = Eigen::Vector2d::Zero();
    Eigen::Vector2d shear_center = Eigen::Vector2d::Zero();
    double enclosed_area = 0.0;
    Eigen::Vector2d area_centroid = Eigen::Vector2d::Zero();

    // Bending stiffness about the tension center, ignoring cross coupling.
    double EI_edge() const { return K(0, 0) > 0.0 ? K(1, 1) - K(0, 1) * K(0, 1) / K(0, 0) : 0.0; }
    double EI_flap() const { return K(0, 0) > 0.0 ? K(2, 2) - K(0, 2) * K(0, 2) / K(0, 0) : 0.0; }
};

inline Eigen::Matrix2d rotation2(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return (Eigen::Matrix2d() << c, -s, s, c).finished();
}

// Rotates chord-frame section properties by `angle` into the rotor frame.
inline BeamSection to_beam_section(double radius, const SectionProperties& p, double angle) {
    BeamSection b;
    b.radius = radius;
    if (p.EA <= 0.0) return b;
    Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
    T.block<2, 2>(1, 1) = rotation2(angle);
    b.K = T * p.K * T.transpose();
    b.GJ = p.GJ;
    b.mass_per_length = p.mass_per_length;
    const Eigen::Matrix2d R = rotation2(angle);
    b.mass_center = R * p.mass_center;
    b.shear_center = R * p.shear_center;
    b.enclosed_area = p.enclosed_area;
    b.area_centroid = R * p.area_centroid;
    return b;
}

// Distributed loads per unit length, reduced to the pitch axis, sampled at
// the section radii and linear in between. Force (X, Y, Z) and moment
// (X, Y, Z) components in the rotor frame. Optional tip point loads.
struct LineLoads {
    std::vector<Eigen::Vector3d> f, m;
    Eigen::Vector3d tip_force = Eigen::Vector3d::Zero();
    Eigen::Vector3d tip_moment = Eigen::Vector3d::Zero();

    static LineLoads zeros(std::size_t n) {
        LineLoads l;
        l.f.assign(n, Eigen::Vector3d::Zero());
        l.m.assign(n, Eigen::Vector3d::Zero());
        return l;
    }
    LineLoads& operator+=(const LineLoads& o) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] += o.f[i];
            m[i] += o.m[i];
        }
        tip_force += o.tip_force;
        tip_moment += o.tip_moment;
        return *this;
    }
    LineLoads& operator*=(double s) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] *= s;
            m[i] *= s;
        }
        tip_force *= s;
        tip_moment *= s;
        return *this;
    }
    // Adds a force per length acting at (X, Y) off the pitch axis.
    void add_offset_force(std::size_t i, const Eigen::Vector3d& force, const Eigen::Vector2d& at) {
        f[i] += force;
        m[i] += Eigen::Vector3d(at.y() * force.z(), -at.x() * force.z(), at.x() * force.y() - at.y() * force.x());
    }
};

struct BodyForceOptions {
    bool self_weight = false;
    bool buoyancy = false;
    bool centrifugal = false;
    double gravity = 9.81;
    double fluid_density = 1.225;
    double omega_rad_s = 0.0;
    double azimuth_deg = 180.0;  // 0 = blade pointing up
};

// Self-weight and buoyancy act in the rotor plane at the given azimuth;
// centrifugal force is radial. Weight acts at the mass center, buoyancy at
// the centroid of the enclosed area.
inline LineLoads body_force_loads(const std::vector<BeamSection>& secs, const BodyForceOptions& o) {
    LineLoads l = LineLoads::zeros(secs.size());
    const double az = o.azimuth_deg * std::numbers::pi / 180.0;
    const Eigen::Vector3d gdir(std::sin(az), 0.0, -std::cos(az));
    for (std::size_t i = 0; i < secs.size(); ++i) {
        const auto& s = secs[i];
        if (o.self_weight) l.add_offset_force(i, s.mass_per_length * o.gravity * gdir, s.mass_center);
        if (o.buoyancy)
            l.add_offset_force(i, -o.fluid_density * o.gravity * s.enclosed_area * gdir, s.area_centroid);
        if (o.centrifugal)
            l.add_offset_force(i, Eigen::Vector3d(0.0, 0.0, s.mass_per_length * o.omega_rad_s * o.omega_rad_s * s.radius),
                               s.mass_center);
    }
    return l;
}

// Internal stress resultants at a cut, rotor frame, about the pitch axis:
// N = int sigma dA, Qx = int sigma X dA, Qy = int sigma Y dA, (Vx, Vy) the
// shear force, T the torque.
inline std::vector<SectionResultants> cantilever_resultants(const std::vector<double>& radii, const LineLoads& l) {
    const std::size_t n = radii.size();
    BLADEOPT_REQUIRE(l.f.size() == n && l.m.size() == n, StructuralError, "loads: size does not match sections");
    std::vector<SectionResultants> out(n);
    const double tip = radii.back();
    for (std::size_t i = 0; i < n; ++i) {
        const double z = radii[i];
        Eigen::Vector3d F = l.tip_force;
        Eigen::Vector3d M = l.tip_moment;
        M.x() += -(tip - z) * l.tip_force.y();
        M.y() += (tip - z) * l.tip_force.x();
        for (std::size_t k = i; k + 1 < n; ++k) {
            const double s0 = radii[k], s1 = radii[k + 1], h = s1 - s0, sm = 0.5 * (s0 + s1);
            const Eigen::Vector3d fm = 0.5 * (l.f[k] + l.f[k + 1]);
            F += 0.5 * h * (l.f[k] + l.f[k + 1]);
            M += 0.5 * h * (l.m[k] + l.m[k + 1]);
            // Simpson is exact for the arm times a linear load.
            const Eigen::Vector3d arm_f =
                h / 6.0 * ((s0 - z) * l.f[k] + 4.0 * (sm - z) * fm + (s1 - z) * l.f[k + 1]);
            M.x() += -arm_f.y();
            M.y() += arm_f.x();
        }
        out[i].N = F.z();
        out[i].Vx = F.x();
        out[i].Vy = F.y();
        out[i].Qy = M.x();
        out[i].Qx = -M.y();
        out[i].T = M.z();
    }
    return out;
}

struct BeamState {
    std::vector<double> z;                 // node radii
    std::vector<double> axial, edge, flap; // displacements W, U (X), V (Y)
    std::vector<double> edge_slope, flap_slope;
    std::vector<double> twist;             // elastic twist about +z [rad]
    double tip_deflection = 0.0;           // flapwise

    // Linear interpolation of a nodal field at radius r.
    static double sample(const std::vector<double>& zs, const std::vector<double>& v, double r) {
        if (r <= zs.front()) return v.front();
        if (r >= zs.back()) return v.back();
        const auto it = std::upper_bound(zs.begin(), zs.end(), r);
        const auto k = static_cast<std::size_t>(it - zs.begin());
        const double t = (r - zs[k - 1]) / (zs[k] - zs[k - 1]);
        return v[k - 1] + t * (v[k] - v[k - 1]);
    }
};

namespace detail {

inline constexpr std::array<double, 4> kGaussX = {0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
                                                  0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
inline constexpr std::array<double, 4> kGaussW = {0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
                                                  0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};

// Linear interpolation weights for radius z over sorted radii.
struct Bracket {
    std::size_t k0 = 0, k1 = 0;
    double t = 0.0;
};

inline Bracket bracket(const std::vector<double>& rs, double z) {
    if (z <= rs.front()) return {0, 0, 0.0};
    if (z >= rs.back()) return {rs.size() - 1, rs.size() - 1, 0.0};
    const auto it = std::upper_bound(rs.begin(), rs.end(), z);
    const auto k = static_cast<std::size_t>(it - rs.begin());
    return {k - 1, k, (z - rs[k - 1]) / (rs[k] - rs[k - 1])};
}

template <class T>
T lerp(const std::vector<T>& v, const Bracket& b) {
    return v[b.k0] * (1.0 - b.t) + v[b.k1] * b.t;
}

// Hermite shape functions on [0, 1] for element length h: values, first and
// second derivatives with respect to z.
struct Hermite {
    std::array<double, 4> n, d1, d2;
    Hermite(double x, double h) {
        const double x2 = x * x, x3 = x2 * x;
        n = {1 - 3 * x2 + 2 * x3, h * (x - 2 * x2 + x3), 3 * x2 - 2 * x3, h * (-x2 + x3)};
        d1 = {(-6 * x + 6 * x2) / h, 1 - 4 * x + 3 * x2, (6 * x - 6 * x2) / h, -2 * x + 3 * x2};
        d2 = {(-6 + 12 * x) / (h * h), (-4 + 6 * x) / h, (6 - 12 * x) / (h * h), (-2 + 6 * x) / h};
    }
};

} // namespace detail

// Clamped-free Euler-Bernoulli beam from the first section radius to the
// last, meshed with uniform elements. Axial stretching and biaxial bending
// are coupled through K; torsion about the shear center is separate.
class BeamModel {
public:
    static constexpr int kDof = 5;  // W, U, U', V, V' per node

    BeamModel(std::vector<BeamSection> sections, int n_elems) : secs_(std::move(sections)), ne_(n_elems) {
        BLADEOPT_REQUIRE(secs_.size() >= 2, StructuralError, "beam: need at least two sections");
        BLADEOPT_REQUIRE(n_elems >= 1, StructuralError, "beam: need at least one element");
        for (const auto& s : secs_) radii_.push_back(s.radius);
        for (std::size_t i = 1; i < radii_.size(); ++i)
            BLADEOPT_REQUIRE(radii_[i] > radii_[i - 1], StructuralError, "beam: section radii must increase");
        for (std::size_t i = 0; i < secs_.size(); ++i) {
            Ks_.push_back(secs_[i].K);
            gj_.push_back(secs_[i].GJ);
            mass_.push_back(secs_[i].mass_per_length);
            sc_.push_back(secs_[i].shear_center);
        }
        h_ = (radii_.back() - radii_.front()) / ne_;
        for (int j = 0; j <= ne_; ++j) z_.push_back(radii_.front() + h_ * j);
        z_.back() = radii_.back();
        assemble();
    }

    const std::vector<double>& node_radii() const { return z_; }
    const std::vector<BeamSection>& sections() const { return secs_; }
    double element_length() const { return h_; }

    // Total translational mass implied by the element mass integration.
    double fe_mass() const {
        double m = 0.0;
        for (int e = 0; e < ne_; ++e)
            for (std::size_t g = 0; g < 4; ++g)
                m += detail::kGaussW[g] * h_ * detail::lerp(mass_, detail::bracket(radii_, z_[e] + detail::kGaussX[g] * h_));
        return m;
    }

    BeamState solve(const LineLoads& l) const {
        BLADEOPT_REQUIRE(l.f.size() == secs_.size() && l.m.size() == secs_.size(), StructuralError,
                         "beam: load samples do not match sections");
        const Eigen::Index nd = kDof * ne_;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
        Eigen::VectorXd trhs = Eigen::VectorXd::Zero(ne_);
        for (int e = 0; e < ne_; ++e) {
            for (std::size_t g = 0; g < 4; ++g) {
                const double x = detail::kGaussX[g], w = detail::kGaussW[g] * h_;
                const auto b = detail::bracket(radii_, z_[e] + x * h_);
                const Eigen::Vector3d f = detail::lerp(l.f, b), m = detail::lerp(l.m, b);
                const detail::Hermite H(x, h_);
                std::array<double, 10> fe{};
                fe[0] = (1 - x) * f.z();
                fe[5] = x * f.z();
                for (int a = 0; a < 2; ++a) {
                    // U, U' and V, V' of node a use Hermite functions 2a, 2a+1.
                    const int o = 5 * a;
                    fe[o + 1] = H.n[2 * a] * f.x() + H.d1[2 * a] * m.y();
                    fe[o + 2] = H.n[2 * a + 1] * f.x() + H.d1[2 * a + 1] * m.y();
                    fe[o + 3] = H.n[2 * a] * f.y() - H.d1[2 * a] * m.x();
                    fe[o + 4] = H.n[2 * a + 1] * f.y() - H.d1[2 * a + 1] * m.x();
                }
                for (int k = 0; k < 10; ++k) {
                    const Eigen::Index gi = global_dof(e, k);
                    if (gi >= 0) rhs(gi) += w * fe[static_cast<std::size_t>(k)];
                }
                const Eigen::Vector2d sc = detail::lerp(sc_, b);
                const double msc = m.z() - (sc.x() * f.y() - sc.y() * f.x());
                if (e > 0) trhs(e - 1) += w * (1 - x) * msc;
                trhs(e) += w * x * msc;
            }
        }
        const Eigen::Index last = nd - kDof;
        rhs(last + 0) += l.tip_force.z();
        rhs(last + 1) += l.tip_force.x();
        rhs(last + 2) += l.tip_moment.y();
        rhs(last + 3) += l.tip_force.y();
        rhs(last + 4) += -l.tip_moment.x();
        const Eigen::Vector2d sc_tip = secs_.back().shear_center;
        trhs(ne_ - 1) += l.tip_moment.z() - (sc_tip.x() * l.tip_force.y() - sc_tip.y() * l.tip_force.x());

        const Eigen::VectorXd d = ldlt_.solve(rhs);
        const Eigen::VectorXd psi = tor_ldlt_.solve(trhs);
        if (ldlt_.info() != Eigen::Success || !d.allFinite() || !psi.allFinite())
            throw StructuralError("beam: static solve failed");

        BeamState s;
        s.z = z_;
        s.axial.assign(z_.size(), 0.0);
        s.edge = s.flap = s.edge_slope = s.flap_slope = s.twist = s.axial;
        for (int j = 1; j <= ne_; ++j) {
            const Eigen::Index o = kDof * (j - 1);
            const auto k = static_cast<std::size_t>(j);
            s.axial[k] = d(o);
            s.edge[k] = d(o + 1);
            s.edge_slope[k] = d(o + 2);
            s.flap[k] = d(o + 3);
            s.flap_slope[k] = d(o + 4);
            s.twist[k] = psi(j - 1);
        }
        s.tip_deflection = s.flap.back();
        return s;
    }

    // Bending natural frequencies [rad/s], lowest n of each family.
    struct Modes {
        std::vector<double> flap, edge;
        Eigen::MatrixXd flap_shapes, edge_shapes;  // nodal displacement per column
    };

    Modes modal(int n_modes) const {
        Modes out;
        auto family = [&](bool flap, std::vector<double>& freq, Eigen::MatrixXd& shapes) {
            const Eigen::Index nd = 2 * ne_;
            Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nd, nd), M = Eigen::MatrixXd::Zero(nd, nd);
            for (int e = 0; e < ne_; ++e) {
                Eigen::Matrix4d ke = Eigen::Matrix4d::Zero(), me = Eigen::Matrix4d::Zero();
                for (std::size_t g = 0; g < 4; ++g) {
                    const double x = detail::kGaussX[g], w = detail::kGaussW[g] * h_;
                    const auto b = detail::bracket(radii_, z_[e] + x * h_);
                    const Eigen::Matrix3d Kz = detail::lerp(Ks_, b);
                    const int c = flap ? 2 : 1;
                    const double ei = Kz(0, 0) > 0.0 ? Kz(c, c) - Kz(0, c) * Kz(0, c) / Kz(0, 0) : 0.0;
                    const double mz = detail::lerp(mass_, b);
                    const detail::Hermite H(x, h_);
                    const Eigen::Vector4d n(H.n[0], H.n[1], H.n[2], H.n[3]);
                    const Eigen::Vector4d d2(H.d2[0], H.d2[1], H.d2[2], H.d2[3]);
                    ke += w * ei * d2 * d2.transpose();
                    me += w * mz * n * n.transpose();
                }
                for (int a = 0; a < 4; ++a)
                    for (int bb = 0; bb < 4; ++bb) {
                        const Eigen::Index ia = 2 * e + a - 2, ib = 2 * e + bb - 2;
                        if (ia < 0 || ib < 0) continue;
                        K(ia, ib) += ke(a, bb);
                        M(ia, ib) += me(a, bb);
                    }
            }
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
            if (es.info() != Eigen::Success) throw NumericalError("modal: eigen solver failed");
            const Eigen::Index n = std::min<Eigen::Index>(n_modes, nd);
            shapes.resize(ne_ + 1, n);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double lam = es.eigenvalues()(k);
                if (!(lam > 0.0) || !std::isfinite(lam)) throw NumericalError("modal: non-positive eigenvalue");
                freq.push_back(std::sqrt(lam));
                shapes(0, k) = 0.0;
                for (int j = 1; j <= ne_; ++j) shapes(j, k) = es.eigenvectors()(2 * (j - 1), k);
            }
        };
        family(true, out.flap, out.flap_shapes);
        family(false, out.edge, out.edge_shapes);
        return out;
    }

private:
    // Element-local dof k (0..9) of element e mapped to the reduced global
    // index, or -1 for the clamped root.
    Eigen::Index global_dof(int e, int k) const {
        const int node = e + k / 5;
        if (node == 0) return -1;
        return kDof * (node - 1) + k % 5;
    }

    void assemble() {
        const Eigen::Index nd = kDof * ne_;
        std::vector<Eigen::Triplet<double>> trip, ttrip;
        for (int e = 0; e < ne_; ++e) {
            Eigen::Matrix<double, 10, 10> ke = Eigen::Matrix<double, 10, 10>::Zero();
            double gj_int = 0.0;
            for (std::size_t g = 0; g < 4; ++g) {
                const double x = detail::kGaussX[g], w = detail::kGaussW[g] * h_;
                const auto b = detail::bracket(radii_, z_[e] + x * h_);
                const Eigen::Matrix3d Kz = detail::lerp(Ks_, b);
                gj_int += w * detail::lerp(gj_, b);
                const detail::Hermite H(x, h_);
                Eigen::Matrix<double, 3, 10> B = Eigen::Matrix<double, 3, 10>::Zero();
                B(0, 0) = -1.0 / h_;
                B(0, 5) = 1.0 / h_;
                for (int a = 0; a < 2; ++a) {
                    B(1, 5 * a + 1) = -H.d2[2 * a];
                    B(1, 5 * a + 2) = -H.d2[2 * a + 1];
                    B(2, 5 * a + 3) = -H.d2[2 * a];
                    B(2, 5 * a + 4) = -H.d2[2 * a + 1];
                }
                ke += w * B.transpose() * Kz * B;
            }
            for (int a = 0; a < 10; ++a)
                for (int b = 0; b < 10; ++b) {
                    const Eigen::Index ia = global_dof(e, a), ib = global_dof(e, b);
                    if (ia >= 0 && ib >= 0) trip.emplace_back(ia, ib, ke(a, b));
                }
            const double kt = gj_int / (h_ * h_);
            if (e > 0) {
                ttrip.emplace_back(e - 1, e - 1, kt);
                ttrip.emplace_back(e - 1, e, -kt);
                ttrip.emplace_back(e, e - 1, -kt);
            }
            ttrip.emplace_back(e, e, kt);
        }
        Eigen::SparseMatrix<double> K(nd, nd), KT(ne_, ne_);
        K.setFromTriplets(trip.begin(), trip.end());
        KT.setFromTriplets(ttrip.begin(), ttrip.end());
        ldlt_.compute(K);
        tor_ldlt_.compute(KT);
        auto spd = [](const auto& solver) {
            if (solver.info() != Eigen::Success) return false;
            const auto d = solver.vectorD();
            return d.allFinite() && d.minCoeff() > 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
        };
        if (!spd(ldlt_) || !spd(tor_ldlt_)) throw StructuralError("beam: singular stiffness (zero section stiffness)");
    }

    std::vector<BeamSection> secs_;
    int ne_;
    std::vector<double> radii_, z_;
    std::vector<Eigen::Matrix3d> Ks_;
    std::vector<double> gj_, mass_;
    std::vector<Eigen::Vector2d> sc_;
    double h_ = 0.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_, tor_ldlt_;
};

} // namespace bladeopt
