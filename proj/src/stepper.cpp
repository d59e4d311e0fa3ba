#include "slick/stepper.hpp"

#include <cmath>

#include "slick/errors.hpp"

namespace slick {

Stepper::Stepper(GridPtr grid, const TensionModel& model, double gamma, Scheme scheme,
                 bool corrector)
    : grid_(std::move(grid)),
      model_(&model),
      gamma_(gamma),
      core_(grid_, gamma, model),
      scheme_(scheme),
      corrector_(corrector) {}

void Stepper::set_history(const FlowState& prev_state) {
    prev_ = prev_state;
    const auto geom = build_geometry(prev_state.eta);
    const auto pack = build_geometry_pack(prev_state.eta);
    prev_G_ = eval_G(prev_state, pack, geom, *model_, gamma_);
    have_prev_ = true;
}

FlowState Stepper::advance(const FlowState& s, double dt, const ForcingPack& G,
                           const ForcingPack* Gprev, const FlowState* sprev) {
    const bool bdf2 = (Gprev != nullptr);
    const double a = bdf2 ? 1.5 / dt : 1.0 / dt;
    if (!core_.prepared(a)) core_.prepare(a);

    const double c0 = model_->c0();
    ModeRhs rhs;
    if (!bdf2) {
        for (int i = 0; i < 3; ++i) rhs.f[i] = (1.0 / dt) * s.u[i] + G.g1[i];
        rhs.h = G.g2;
        rhs.stress = G.g3;
        rhs.kin = (1.0 / dt) * s.eta + G.g4;
        rhs.surf = (1.0 / dt) * s.c(c0) + G.g5;
    } else {
        const double w1 = 2.0 / dt, w2 = -0.5 / dt;
        for (int i = 0; i < 3; ++i)
            rhs.f[i] = w1 * s.u[i] + w2 * sprev->u[i] + 2.0 * G.g1[i] - 1.0 * Gprev->g1[i];
        rhs.h = 2.0 * G.g2 - 1.0 * Gprev->g2;
        for (int i = 0; i < 3; ++i) rhs.stress[i] = 2.0 * G.g3[i] - 1.0 * Gprev->g3[i];
        rhs.kin = w1 * s.eta + w2 * sprev->eta + 2.0 * G.g4 - 1.0 * Gprev->g4;
        rhs.surf = w1 * s.c(c0) + w2 * sprev->c(c0) + 2.0 * G.g5 - 1.0 * Gprev->g5;
    }

    const SpectralState st = step_linear(core_, a, rhs);
    FlowState out(grid_);
    out.u = st.u;
    out.p = st.p;
    out.eta = st.eta;
    out.eta[0] = 0.0;  // pinned zero average
    out.ctilde = st.c;
    out.ctilde[0] += c0;
    out.t = s.t + dt;
    return out;
}

FlowState Stepper::step(const FlowState& s, double dt) {
    if (dt <= 0) throw Error("step: dt must be positive");
    const auto geom = build_geometry(s.eta);
    const auto pack = build_geometry_pack(s.eta);
    if (pack.min_jac < kJacHardLimit)
        throw DegenerateMap("step: min det grad Theta = " + std::to_string(pack.min_jac));
    if (pack.jac_warning) ++jac_warnings_;
    if (geom.slope_warning) ++slope_warnings_;

    ForcingPack G = eval_G(s, pack, geom, *model_, gamma_);

    FlowState out(grid_);
    const bool bdf2 = (scheme_ == Scheme::imex_bdf2) && have_prev_;
    if (bdf2) {
        out = advance(s, dt, G, &*prev_G_, &*prev_);
    } else {
        out = advance(s, dt, G, nullptr, nullptr);
        if (corrector_) {
            // two-stage audit corrector: average the explicit forcing over the step
            const auto geom1 = build_geometry(out.eta);
            const auto pack1 = build_geometry_pack(out.eta);
            ForcingPack G1 = eval_G(out, pack1, geom1, *model_, gamma_);
            ForcingPack Gm;
            for (int i = 0; i < 3; ++i) {
                Gm.g1[i] = 0.5 * (G.g1[i] + G1.g1[i]);
                Gm.g3[i] = 0.5 * (G.g3[i] + G1.g3[i]);
            }
            Gm.g2 = 0.5 * (G.g2 + G1.g2);
            Gm.g4 = 0.5 * (G.g4 + G1.g4);
            Gm.g5 = 0.5 * (G.g5 + G1.g5);
            out = advance(s, dt, Gm, nullptr, nullptr);
        }
    }

    // positivity is monitored, never enforced
    {
        const auto cp = out.ctilde.phys();
        for (double v : cp)
            if (v <= 0.0) {
                ++positivity_warnings_;
                break;
            }
    }

    if (scheme_ == Scheme::imex_bdf2) {
        prev_ = s;
        prev_G_ = std::move(G);
        have_prev_ = true;
    }
    return out;
}

}  // namespace slick
