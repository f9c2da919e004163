#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "bladeopt/core/error.hpp"
#include "bladeopt/model/material.hpp"

namespace bladeopt {

// One ply. Fiber angle is measured from the beam axis (z) toward the
// section periphery direction (s).
struct Lamina {
    const Material* material = nullptr;
    double thickness = 0.0;
    double fiber_angle_deg = 0.0;
};

using Laminate = std::vector<Lamina>;

struct ABD {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    double thickness = 0.0;
};

struct LaminateProps {
    double E_eff = 0.0;   // membrane axial modulus
    double G_eff = 0.0;   // membrane shear modulus
    double rho_eff = 0.0; // thickness-weighted density
    double thickness = 0.0;
};

// Reduced stiffness in the lamina principal axes.
inline Eigen::Matrix3d lamina_q(const Material& m) {
    const double nu21 = m.nu12 * m.E22 / m.E11;
    const double d = 1.0 - m.nu12 * nu21;
    Eigen::Matrix3d q;
    q << m.E11 / d, m.nu12 * m.E22 / d, 0.0,
         m.nu12 * m.E22 / d, m.E22 / d, 0.0,
         0.0, 0.0, m.G12;
    return q;
}

// Reduced stiffness rotated into laminate axes.
inline Eigen::Matrix3d lamina_qbar(const Material& mat, double angle_deg) {
    const Eigen::Matrix3d q = lamina_q(mat);
    const double th = angle_deg * std::numbers::pi / 180.0;
    const double m = std::cos(th), n = std::sin(th);
    const double m2 = m * m, n2 = n * n, mn = m * n;
    const double q11 = q(0, 0), q22 = q(1, 1), q12 = q(0, 1), q66 = q(2, 2);
    Eigen::Matrix3d qb;
    qb(0, 0) = q11 * m2 * m2 + 2.0 * (q12 + 2.0 * q66) * m2 * n2 + q22 * n2 * n2;
    qb(1, 1) = q11 * n2 * n2 + 2.0 * (q12 + 2.0 * q66) * m2 * n2 + q22 * m2 * m2;
    qb(0, 1) = qb(1, 0) = (q11 + q22 - 4.0 * q66) * m2 * n2 + q12 * (m2 * m2 + n2 * n2);
    qb(2, 2) = (q11 + q22 - 2.0 * q12 - 2.0 * q66) * m2 * n2 + q66 * (m2 * m2 + n2 * n2);
    qb(0, 2) = qb(2, 0) = (q11 - q12 - 2.0 * q66) * m2 * mn + (q12 - q22 + 2.0 * q66) * mn * n2;
    qb(1, 2) = qb(2, 1) = (q11 - q12 - 2.0 * q66) * mn * n2 + (q12 - q22 + 2.0 * q66) * m2 * mn;
    return qb;
}

// Stacks from the first ply (bottom, z = -h/2) to the last.
inline ABD laminate_abd(const Laminate& stack) {
    BLADEOPT_REQUIRE(!stack.empty(), StructuralError, "laminate: empty stack");
    ABD out;
    for (const auto& l : stack) {
        BLADEOPT_REQUIRE(l.material != nullptr && l.thickness > 0.0, StructuralError,
                         "laminate: ply needs a material and positive thickness");
        out.thickness += l.thickness;
    }
    double z0 = -0.5 * out.thickness;
    for (const auto& l : stack) {
        const double z1 = z0 + l.thickness;
        const Eigen::Matrix3d qb = lamina_qbar(*l.material, l.fiber_angle_deg);
        out.A += qb * (z1 - z0);
        out.B += qb * (0.5 * (z1 * z1 - z0 * z0));
        out.D += qb * ((z1 * z1 * z1 - z0 * z0 * z0) / 3.0);
        z0 = z1;
    }
    return out;
}

inline Eigen::Matrix3d membrane_compliance(const ABD& abd) {
    Eigen::FullPivLU<Eigen::Matrix3d> lu(abd.A);
    if (!lu.isInvertible() || !std::isfinite(lu.rcond()) || lu.rcond() < 1e-14)
        throw StructuralError("laminate: singular membrane stiffness (degenerate laminate)");
    return lu.inverse();
}

struct LaminaResponse {
    double s11 = 0.0, s22 = 0.0, t12 = 0.0;
    double e11 = 0.0, e22 = 0.0, g12 = 0.0;
};

// A laminate with its stiffness terms precomputed, for repeated stress recovery.
struct LaminateModel {
    Laminate plies;
    ABD abd;
    Eigen::Matrix3d compliance = Eigen::Matrix3d::Zero();
    LaminateProps props;
    std::vector<Eigen::Matrix3d> q;

    explicit LaminateModel(Laminate stack) : plies(std::move(stack)) {
        abd = laminate_abd(plies);
        compliance = membrane_compliance(abd);
        props.thickness = abd.thickness;
        props.E_eff = 1.0 / (abd.thickness * compliance(0, 0));
        props.G_eff = 1.0 / (abd.thickness * compliance(2, 2));
        double mass = 0.0;
        for (const auto& l : plies) {
            mass += l.material->rho * l.thickness;
            q.push_back(lamina_q(*l.material));
        }
        props.rho_eff = mass / abd.thickness;
    }
};

inline LaminateProps laminate_effective_props(const Laminate& stack) { return LaminateModel(stack).props; }

// Converts effective beam stresses on a panel to in-plane loads
// (Nz = sigma_zz t, Nzs = tau_zs t), solves for mid-plane strain with the
// membrane compliance, and returns each ply's principal-axis response.
inline std::vector<LaminaResponse> lamina_stress_recovery(const LaminateModel& lam, double sigma_zz,
                                                          double tau_zs) {
    const double t = lam.abd.thickness;
    const Eigen::Vector3d eps = lam.compliance * Eigen::Vector3d(sigma_zz * t, 0.0, tau_zs * t);
    std::vector<LaminaResponse> out;
    out.reserve(lam.plies.size());
    for (std::size_t k = 0; k < lam.plies.size(); ++k) {
        const double th = lam.plies[k].fiber_angle_deg * std::numbers::pi / 180.0;
        const double m = std::cos(th), s = std::sin(th);
        LaminaResponse r;
        r.e11 = m * m * eps(0) + s * s * eps(1) + m * s * eps(2);
        r.e22 = s * s * eps(0) + m * m * eps(1) - m * s * eps(2);
        r.g12 = -2.0 * m * s * eps(0) + 2.0 * m * s * eps(1) + (m * m - s * s) * eps(2);
        const Eigen::Vector3d sig = lam.q[k] * Eigen::Vector3d(r.e11, r.e22, r.g12);
        r.s11 = sig(0);
        r.s22 = sig(1);
        r.t12 = sig(2);
        out.push_back(r);
    }
    return out;
}

inline std::vector<LaminaResponse> lamina_stress_recovery(const Laminate& stack, double sigma_zz, double tau_zs) {
    return lamina_stress_recovery(LaminateModel(stack), sigma_zz, tau_zs);
}

} // namespace bladeopt
