#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bladeopt/core/error.hpp"
#include "bladeopt/structures/laminate.hpp"

namespace bladeopt {

enum class PanelRegion { shell, lep, spar_cap_upper, spar_cap_lower, tep, web_fore, web_aft };

inline const char* region_name(PanelRegion r) {
    switch (r) {
    case PanelRegion::shell: return "shell";
    case PanelRegion::lep: return "LEP";
    case PanelRegion::spar_cap_upper: return "spar_cap_upper";
    case PanelRegion::spar_cap_lower: return "spar_cap_lower";
    case PanelRegion::tep: return "TEP";
    case PanelRegion::web_fore: return "web_fore";
    case PanelRegion::web_aft: return "web_aft";
    }
    return "?";
}

// A flat-laminate region of the section wall. extent is its arc length.
struct SectionPanel {
    PanelRegion region = PanelRegion::shell;
    LaminateModel laminate;
    double extent = 0.0;
};

struct SectionEdge {
    int a = 0, b = 0;  // node indices; positive flow runs a -> b
    int panel = 0;
};

// Closed cell as a signed edge loop (+1 when traversed a -> b).
struct CellLoop {
    std::vector<std::pair<int, int>> edges;
};

// Discretized thin-walled section: wall midline nodes in the chord frame
// (x along the chord toward the trailing edge, y normal to it, origin at the
// pitch axis), straight wall segments, and closed cells.
struct ThinWallSection {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<SectionEdge> edges;
    std::vector<SectionPanel> panels;
    std::vector<CellLoop> cells;

    double edge_length(std::size_t e) const { return (nodes[edges[e].b] - nodes[edges[e].a]).norm(); }

    // Throws TopologyError unless every cell is a closed loop and the wall
    // graph is connected with exactly one independent loop per cell.
    void validate() const {
        const auto nv = nodes.size(), ne = edges.size();
        BLADEOPT_REQUIRE(nv >= 3 && ne >= 3, TopologyError, "section: too few nodes or edges");
        BLADEOPT_REQUIRE(!cells.empty(), TopologyError, "section: open periphery (no closed cell)");
        std::vector<int> degree(nv, 0);
        for (const auto& e : edges) {
            BLADEOPT_REQUIRE(e.a >= 0 && e.b >= 0 && static_cast<std::size_t>(e.a) < nv &&
                                 static_cast<std::size_t>(e.b) < nv && e.a != e.b,
                             TopologyError, "section: invalid edge");
            BLADEOPT_REQUIRE(e.panel >= 0 && static_cast<std::size_t>(e.panel) < panels.size(), TopologyError,
                             "section: edge references a missing panel");
            ++degree[static_cast<std::size_t>(e.a)];
            ++degree[static_cast<std::size_t>(e.b)];
        }
        for (int d : degree) BLADEOPT_REQUIRE(d >= 2, TopologyError, "section: open periphery (dangling wall)");
        BLADEOPT_REQUIRE(ne + 1 == nv + cells.size(), TopologyError,
                         "section: cell count does not match the wall graph");
        for (const auto& c : cells) {
            BLADEOPT_REQUIRE(c.edges.size() >= 2, TopologyError, "section: degenerate cell");
            auto head = [&](std::pair<int, int> se) {
                const auto& e = edges[static_cast<std::size_t>(se.first)];
                return se.second > 0 ? e.b : e.a;
            };
            auto tail = [&](std::pair<int, int> se) {
                const auto& e = edges[static_cast<std::size_t>(se.first)];
                return se.second > 0 ? e.a : e.b;
            };
            for (std::size_t k = 0; k < c.edges.size(); ++k) {
                BLADEOPT_REQUIRE(c.edges[k].first >= 0 && static_cast<std::size_t>(c.edges[k].first) < ne,
                                 TopologyError, "section: cell references a missing edge");
                const auto next = c.edges[(k + 1) % c.edges.size()];
                BLADEOPT_REQUIRE(head(c.edges[k]) == tail(next), TopologyError, "section: cell loop is not closed");
            }
        }
    }
};

struct SectionProperties {
    double EA = 0.0;
    double EI_flap = 0.0;   // about the chord-parallel axis through the tension center
    double EI_edge = 0.0;   // about the chord-normal axis through the tension center
    double EI_cross = 0.0;
    double EI_principal_1 = 0.0, EI_principal_2 = 0.0;
    double principal_angle_rad = 0.0;
    double GJ = 0.0;
    double mass_per_length = 0.0;
    Eigen::Vector2d tension_center = Eigen::Vector2d::Zero();
    Eigen::Vector2d shear_center = Eigen::Vector2d::Zero();
    Eigen::Vector2d mass_center = Eigen::Vector2d::Zero();
    double enclosed_area = 0.0;
    Eigen::Vector2d area_centroid = Eigen::Vector2d::Zero();
    // Integral of E [1 x y]^T [1 x y] over the wall, about the pitch axis.
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
};

// Section stress resultants in the chord frame, moments about the pitch axis.
// Qx = int(sigma x dA), Qy = int(sigma y dA), T = int(x tau_y - y tau_x dA).
struct SectionResultants {
    double N = 0.0, Qx = 0.0, Qy = 0.0;
    double Vx = 0.0, Vy = 0.0, T = 0.0;
};

struct EdgeStress {
    double sigma_a = 0.0, sigma_b = 0.0;  // sigma_zz at the two edge ends
    double tau = 0.0;                     // tau_zs, positive along a -> b
};

// Modulus-weighted section integrals plus closed-cell shear flow. Built once
// per section; stress evaluation reuses the factorized flow system.
class SectionAnalysis {
public:
    explicit SectionAnalysis(ThinWallSection sec) : sec_(std::move(sec)) {
        sec_.validate();
        compute_integrals();
        factor_flow_system();
        solve_unit_flows();
    }

    const ThinWallSection& section() const { return sec_; }
    const SectionProperties& properties() const { return props_; }

    // Normal stress from (N, Qx, Qy) and shear stress from (Vx, Vy, T).
    std::vector<EdgeStress> stresses(const SectionResultants& r) const {
        const Eigen::Vector3d d = k_lu_.solve(Eigen::Vector3d(r.N, r.Qx, r.Qy));
        const double t_sc = r.T - (props_.shear_center.x() * r.Vy - props_.shear_center.y() * r.Vx);
        std::vector<EdgeStress> out(sec_.edges.size());
        for (std::size_t e = 0; e < sec_.edges.size(); ++e) {
            const auto& ed = sec_.edges[e];
            const auto& p = sec_.panels[static_cast<std::size_t>(ed.panel)].laminate.props;
            const auto& na = sec_.nodes[static_cast<std::size_t>(ed.a)];
            const auto& nb = sec_.nodes[static_cast<std::size_t>(ed.b)];
            out[e].sigma_a = p.E_eff * (d(0) + d(1) * na.x() + d(2) * na.y());
            out[e].sigma_b = p.E_eff * (d(0) + d(1) * nb.x() + d(2) * nb.y());
            const double q = r.Vx * q_vx_(static_cast<Eigen::Index>(e)) + r.Vy * q_vy_(static_cast<Eigen::Index>(e)) +
                             t_sc / props_.GJ * q_tw_(static_cast<Eigen::Index>(e));
            out[e].tau = q / p.thickness;
        }
        return out;
    }

    // Shear flows for unit Vx, unit Vy (through the shear center) and unit twist rate.
    const Eigen::VectorXd& flow_vx() const { return q_vx_; }
    const Eigen::VectorXd& flow_vy() const { return q_vy_; }
    const Eigen::VectorXd& flow_twist() const { return q_tw_; }

    // Largest relative residual of node equilibrium and cell compatibility
    // over the three unit solutions.
    double flow_residual() const { return flow_residual_; }

    // Twist rate implied by a flow field, per cell: (1/2A) * loop integral q ds / Gt.
    std::vector<double> cell_twist_rates(const Eigen::VectorXd& q) const {
        std::vector<double> out;
        for (std::size_t c = 0; c < sec_.cells.size(); ++c) {
            double s = 0.0;
            for (auto [e, sign] : sec_.cells[c].edges) s += sign * q(e) * compliance_[static_cast<std::size_t>(e)];
            out.push_back(s / (2.0 * cell_area_[c]));
        }
        return out;
    }

    // Moment of a flow field about the pitch axis.
    double flow_torque(const Eigen::VectorXd& q) const {
        double t = 0.0;
        for (std::size_t e = 0; e < sec_.edges.size(); ++e) {
            const auto& a = sec_.nodes[static_cast<std::size_t>(sec_.edges[e].a)];
            const auto& b = sec_.nodes[static_cast<std::size_t>(sec_.edges[e].b)];
            t += q(static_cast<Eigen::Index>(e)) * (a.x() * b.y() - a.y() * b.x());
        }
        return t;
    }

private:
    void compute_integrals() {
        Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
        kb_.setZero();
        double m = 0.0;
        Eigen::Vector2d mc = Eigen::Vector2d::Zero();
        compliance_.resize(sec_.edges.size());
        for (std::size_t e = 0; e < sec_.edges.size(); ++e) {
            const auto& ed = sec_.edges[e];
            const auto& p = sec_.panels[static_cast<std::size_t>(ed.panel)].laminate.props;
            const Eigen::Vector3d pa(1.0, sec_.nodes[static_cast<std::size_t>(ed.a)].x(),
                                     sec_.nodes[static_cast<std::size_t>(ed.a)].y());
            const Eigen::Vector3d pb(1.0, sec_.nodes[static_cast<std::size_t>(ed.b)].x(),
                                     sec_.nodes[static_cast<std::size_t>(ed.b)].y());
            const double L = sec_.edge_length(e);
            BLADEOPT_REQUIRE(L > 0.0, TopologyError, "section: zero-length wall segment");
            const double et = p.E_eff * p.thickness;
            K += et * L *
                 (pa * pa.transpose() / 3.0 + (pa * pb.transpose() + pb * pa.transpose()) / 6.0 +
                  pb * pb.transpose() / 3.0);
            kb_ += 0.5 * et * L * (pa * pa.transpose() + pb * pb.transpose());
            const double me = p.rho_eff * p.thickness * L;
            m += me;
            mc += me * 0.5 * (pa.tail<2>() + pb.tail<2>());
            compliance_[e] = L / (p.G_eff * p.thickness);
        }
        for (auto& pnl : sec_.panels) pnl.extent = 0.0;
        for (std::size_t e = 0; e < sec_.edges.size(); ++e)
            sec_.panels[static_cast<std::size_t>(sec_.edges[e].panel)].extent += sec_.edge_length(e);

        auto& P = props_;
        P.K = K;
        P.EA = K(0, 0);
        P.tension_center = Eigen::Vector2d(K(0, 1), K(0, 2)) / P.EA;
        const double xt = P.tension_center.x(), yt = P.tension_center.y();
        P.EI_edge = K(1, 1) - P.EA * xt * xt;
        P.EI_flap = K(2, 2) - P.EA * yt * yt;
        P.EI_cross = K(1, 2) - P.EA * xt * yt;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
            (Eigen::Matrix2d() << P.EI_edge, P.EI_cross, P.EI_cross, P.EI_flap).finished());
        P.EI_principal_1 = es.eigenvalues()(1);
        P.EI_principal_2 = es.eigenvalues()(0);
        P.principal_angle_rad = 0.5 * std::atan2(2.0 * P.EI_cross, P.EI_edge - P.EI_flap);
        P.mass_per_length = m;
        P.mass_center = mc / m;
        k_lu_.compute(K);
        if (!(P.EA > 0.0) || std::abs(k_lu_.determinant()) < 1e-300 * std::max(1.0, K.norm()))
            throw StructuralError("section: singular axial/bending stiffness");

        // Cell areas (signed by traversal) and the area enclosed by the outer wall.
        cell_area_.clear();
        double a_tot = 0.0;
        Eigen::Vector2d ac = Eigen::Vector2d::Zero();
        for (const auto& c : sec_.cells) {
            double a = 0.0;
            Eigen::Vector2d cen = Eigen::Vector2d::Zero();
            for (auto [e, sign] : c.edges) {
                const auto& ed = sec_.edges[static_cast<std::size_t>(e)];
                Eigen::Vector2d p0 = sec_.nodes[static_cast<std::size_t>(ed.a)];
                Eigen::Vector2d p1 = sec_.nodes[static_cast<std::size_t>(ed.b)];
                if (sign < 0) std::swap(p0, p1);
                const double cr = p0.x() * p1.y() - p1.x() * p0.y();
                a += 0.5 * cr;
                cen += cr * (p0 + p1) / 6.0;
            }
            BLADEOPT_REQUIRE(std::abs(a) > 0.0, TopologyError, "section: cell with zero enclosed area");
            cell_area_.push_back(a);
            a_tot += a;
            ac += cen;
        }
        P.enclosed_area = std::abs(a_tot);
        P.area_centroid = ac / a_tot;
    }

    void factor_flow_system() {
        const auto nv = static_cast<Eigen::Index>(sec_.nodes.size());
        const auto ne = static_cast<Eigen::Index>(sec_.edges.size());
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ne, ne);
        // Node equilibrium: outflow - inflow = -dN/dz; node 0 is dependent and dropped.
        for (Eigen::Index e = 0; e < ne; ++e) {
            const auto& ed = sec_.edges[static_cast<std::size_t>(e)];
            if (ed.a > 0) M(ed.a - 1, e) += 1.0;
            if (ed.b > 0) M(ed.b - 1, e) -= 1.0;
        }
        for (std::size_t c = 0; c < sec_.cells.size(); ++c)
            for (auto [e, sign] : sec_.cells[c].edges)
                M(nv - 1 + static_cast<Eigen::Index>(c), e) += sign * compliance_[static_cast<std::size_t>(e)];
        flow_matrix_ = M;
        flow_lu_.compute(M);
        if (std::abs(flow_lu_.determinant()) == 0.0 || !std::isfinite(flow_lu_.determinant()))
            throw TopologyError("section: singular shear-flow system");
    }

    Eigen::VectorXd shear_rhs(double vx, double vy) const {
        const auto nv = static_cast<Eigen::Index>(sec_.nodes.size());
        const Eigen::Vector3d d = kb_.ldlt().solve(Eigen::Vector3d(0.0, vx, vy));
        Eigen::VectorXd dn = Eigen::VectorXd::Zero(nv);
        for (std::size_t e = 0; e < sec_.edges.size(); ++e) {
            const auto& ed = sec_.edges[e];
            const auto& p = sec_.panels[static_cast<std::size_t>(ed.panel)].laminate.props;
            const double half = 0.5 * p.E_eff * p.thickness * sec_.edge_length(e);
            for (int n : {ed.a, ed.b}) {
                const auto& xy = sec_.nodes[static_cast<std::size_t>(n)];
                dn(n) += half * (d(0) + d(1) * xy.x() + d(2) * xy.y());
            }
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sec_.edges.size()));
        for (Eigen::Index j = 1; j < nv; ++j) rhs(j - 1) = -dn(j);
        return rhs;
    }

    void solve_unit_flows() {
        const auto nv = static_cast<Eigen::Index>(sec_.nodes.size());
        const Eigen::VectorXd rx = shear_rhs(1.0, 0.0), ry = shear_rhs(0.0, 1.0);
        Eigen::VectorXd rt = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sec_.edges.size()));
        for (std::size_t c = 0; c < sec_.cells.size(); ++c)
            rt(nv - 1 + static_cast<Eigen::Index>(c)) = 2.0 * cell_area_[c];
        q_vx_ = flow_lu_.solve(rx);
        q_vy_ = flow_lu_.solve(ry);
        q_tw_ = flow_lu_.solve(rt);
        flow_residual_ = 0.0;
        const std::array<std::pair<const Eigen::VectorXd*, const Eigen::VectorXd*>, 3> checks{
            {{&q_vx_, &rx}, {&q_vy_, &ry}, {&q_tw_, &rt}}};
        for (auto [q, r] : checks) {
            const double scale = std::max({r->cwiseAbs().maxCoeff(),
                                           (flow_matrix_.cwiseAbs() * q->cwiseAbs()).maxCoeff(), 1e-300});
            flow_residual_ = std::max(flow_residual_, (flow_matrix_ * *q - *r).cwiseAbs().maxCoeff() / scale);
        }

        auto& P = props_;
        P.GJ = flow_torque(q_tw_);
        BLADEOPT_REQUIRE(P.GJ > 0.0 && std::isfinite(P.GJ), StructuralError, "section: non-positive torsional stiffness");
        // A unit shear force through (xs, ys) has moment xs*Vy - ys*Vx about the origin.
        P.shear_center = Eigen::Vector2d(flow_torque(q_vy_), -flow_torque(q_vx_));
    }

    ThinWallSection sec_;
    SectionProperties props_;
    Eigen::Matrix3d kb_ = Eigen::Matrix3d::Zero();  // lumped-boom version of K
    Eigen::PartialPivLU<Eigen::Matrix3d> k_lu_;
    std::vector<double> compliance_;  // L / (G t) per edge
    std::vector<double> cell_area_;
    Eigen::MatrixXd flow_matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXd> flow_lu_;
    Eigen::VectorXd q_vx_, q_vy_, q_tw_;
    double flow_residual_ = 0.0;
};

inline SectionProperties section_properties(const ThinWallSection& sec) { return SectionAnalysis(sec).properties(); }

} // namespace bladeopt
