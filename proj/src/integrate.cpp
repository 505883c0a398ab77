#include "odot/integrate.hpp"

namespace odot {

OElem Integrator::H(const OElem& x) const {
    const OdotCalc& oc = dc_.odot();
    OElem r;
    for (auto& [w, s] : x.c) {
        if (w.bg_count() != 1)
            throw ValidationError("H: word is not in the one-BG component");
        int slot = w.bg_slot();
        Scalar sign((slot % 2) ? -1 : 1);
        for (auto& [bw, cs] : oc.bar().contract_h_word(w.L[(size_t)slot].bw, strategy_).c) {
            OWord nw = w;
            nw.L[(size_t)slot] = OGen::bg(bw);
            r.add(nw, sign * s * cs);
        }
    }
    return r;
}

ObstructionClass Integrator::obstruction_class(const Derivation& theta) const {
    Derivation nb = dc_.nabla(theta);
    if (!nb.is_zero_within(nb.cert_min))
        throw ValidationError("obstruction_class: input is not a nabla-cycle");
    return {theta.on_v, theta.on_b1};
}

Derivation Integrator::solve_nabla(const Derivation& theta) const {
    const BarModule& bar = dc_.odot().bar();
    int k = theta.level();
    if (k == 0 && !(theta.on_v.is_zero() && theta.on_b1.is_zero()))
        throw ObstructionError("solve_nabla: nonzero obstruction class at k = 0",
                               {theta.on_v, theta.on_b1});
    const Derivation& dm1 = dc_.Dm1_cached();

    Derivation chi;
    chi.deg = theta.deg - 1;
    chi.xv_shift = theta.xv_shift;
    chi.bg_shift = theta.bg_shift - 1;
    chi.has_v = true;
    chi.has_b1 = true;
    Scalar s((chi.deg % 2) ? -1 : 1);

    int floor_deg = std::max(theta.cert_min, -bar.depth() + k + 1);
    chi.cert_min = 1;
    for (int i = 0; i >= floor_deg; --i) {
        std::map<std::vector<int>, OElem> level;
        for (auto& mids : bar.free_generators(i)) {
            // rhs = theta_i(gen) + (-1)^{|chi|} chi(D_{-1} gen)
            OElem rhs = theta.on_b.at(i).at(mids);
            OElem dgen;
            for (auto& [bw, c] : bar.d_bar(bar.generator_element(i, mids)).c)
                dgen.add(OWord{{OGen::bg(bw)}}, c);
            rhs.axpy(s, dc_.evaluate(chi, dgen));
            if (!dc_.evaluate(dm1, rhs).is_zero())
                throw ValidationError(
                    "solve_nabla: right-hand side not closed (broken chain map)");
            level[mids] = H(rhs);
        }
        chi.on_b[i] = std::move(level);
        chi.cert_min = i;
    }

    // self-check: nabla(chi) = theta on every certified generator
    Derivation back = dc_.nabla(chi);
    if (!dc_.equal_within(back, theta, std::max(back.cert_min, chi.cert_min)))
        throw ValidationError("solve_nabla: postcondition nabla(chi) = theta failed");
    return chi;
}

Integration Integrator::integrate(const Derivation& D0, int K) const {
    const BarModule& bar = dc_.odot().bar();
    if (bar.depth() < K + 2)
        throw TruncationError("integrate: bar depth too shallow for order " + std::to_string(K) +
                                  " (need T >= " + std::to_string(K + 2) + ")",
                              K + 2);
    if (!dc_.in_Jkn(D0, 0, 2))
        throw ValidationError("integrate: D0 is not in J_0(2) with nabla(D0) = 0");

    Integration I;
    I.D0 = D0;
    I.order = K;
    I.bar_depth = bar.depth();
    for (int m = 1; m <= K; ++m) {
        Derivation R = dc_.zero_like(2, m + 1, -(m - 1));
        for (int i = 0; i <= m - 1; ++i)
            R = dc_.add(R, dc_.commutator(I.D(i), I.D(m - 1 - i)));
        R = dc_.scale(R, Scalar(-1, 2));
        Derivation nbR = dc_.nabla(R);
        if (!nbR.is_zero_within(nbR.cert_min))
            throw ValidationError("integrate: R_m is not a cycle (Jacobi violated)");
        if (m == 1) {
            ObstructionClass cls{R.on_v, R.on_b1};
            if (!cls.is_zero())
                throw ObstructionError("integrate: nonzero obstruction class for D0", cls);
        }
        I.higher.push_back(solve_nabla(R));
    }
    return I;
}

McReport Integrator::verify_mc(const Integration& I, int m) const {
    if (m > I.order)
        throw ValidationError("verify_mc: m exceeds the certified order");
    Derivation E = dc_.nabla(I.D(m));
    for (int i = 0; i <= m - 1; ++i)
        E = dc_.add(E, dc_.scale(dc_.commutator(I.D(i), I.D(m - 1 - i)), Scalar(1, 2)));
    McReport rep;
    rep.window_min = E.cert_min;
    if (!E.is_zero_within(E.cert_min)) {
        rep.pass = false;
        rep.detail = "Maurer-Cartan identity fails at order " + std::to_string(m);
    }
    return rep;
}

DerLevelElem Integrator::operad_eval(const Integration& I, const TreeChain& ch) const {
    DerHandle h(dc_);
    std::map<int, DerLevelElem> images;
    for (int n = 0; n <= I.order; ++n)
        images[n] = DerLevelElem{I.D(n), n + 2, n};
    FreeExtend<DerHandle> fe(h, images);
    return fe.eval(ch);
}

bool Integrator::operad_chain_check(const Integration& I, int n) const {
    if (n == 0) {
        Derivation nb = dc_.nabla(I.D0);
        return nb.is_zero_within(nb.cert_min);
    }
    DerLevelElem lhs = operad_eval(I, d_C_gen(n));
    Derivation rhs = dc_.nabla(I.D(n));
    return dc_.equal_within(lhs.d, rhs, std::max(lhs.d.cert_min, rhs.cert_min));
}

OElem Integrator::gauge_apply(const GaugeElt& g, const OElem& x, int cap, int bg_floor) const {
    OElem cur = x.truncate_xv(cap).truncate_bg_below(bg_floor);
    for (size_t t = 0; t < g.factors.size(); ++t) {
        // forward: apply in push order; inverse: exp(-f) in reverse order
        size_t idx = g.negated ? g.factors.size() - 1 - t : t;
        const Derivation& f = g.factors[idx];
        OElem acc = cur;
        OElem power = cur;
        Scalar fact(1);
        for (int r = 1; true; ++r) {
            // words that would leave the cap or dive below the BG floor after
            // applying f die anyway; dropping them first keeps the series
            // inside the bar window
            OElem src =
                power.truncate_xv(cap - f.xv_shift).truncate_bg_below(bg_floor - f.bg_shift);
            if (src.is_zero())
                break;
            power = dc_.evaluate(f, src).truncate_xv(cap).truncate_bg_below(bg_floor);
            fact *= Scalar(r);
            Scalar coeff = Scalar(1) / fact;
            if (g.negated && (r % 2))
                coeff = -coeff;
            acc.axpy(coeff, power);
            if (r > 2 * cap + 4)
                throw ValidationError("gauge_apply: exp series failed to terminate");
        }
        cur = std::move(acc);
    }
    return cur;
}

std::vector<Derivation> Integrator::conjugate_all(const GaugeElt& g, const Integration& I,
                                                  int maxlevel) const {
    const BarModule& bar = dc_.odot().bar();
    const Derivation& dm1 = dc_.Dm1_cached();
    GaugeElt ginv = g.inverse();
    int cap = maxlevel + 3;

    auto conj_value = [&](const OElem& gen) {
        OElem moved = gauge_apply(g, gen, cap);
        OElem dval = dc_.evaluate(dm1, moved);
        for (int j = 0; j <= I.order; ++j)
            dval.axpy(Scalar(1), dc_.evaluate(I.D(j), moved));
        return gauge_apply(ginv, dval, cap);
    };

    std::vector<Derivation> out;
    for (int k = -1; k <= maxlevel; ++k)
        out.push_back(dc_.zero_like(1, k + 1, k == -1 ? 1 : -k));

    auto split_into = [&](const OElem& val, int base_count, auto&& store) {
        for (int k = -1; k <= maxlevel; ++k) {
            OElem piece;
            for (auto& [w, s] : val.c)
                if (w.xv_count() == base_count + k + 1)
                    piece.add(w, s);
            store(k, std::move(piece));
        }
    };

    OElem genV;
    for (auto& [u, cu] : dc_.odot().algebra().unit.c)
        genV.add(OWord{{OGen::xv(u)}}, cu);
    split_into(conj_value(genV), 1,
               [&](int k, OElem p) { out[(size_t)(k + 1)].on_v = std::move(p); });

    OElem genB1;
    for (auto& [u, cu] : dc_.odot().algebra().unit.c)
        genB1.add(OWord{{OGen::bg({1, u})}}, cu);
    split_into(conj_value(genB1), 0,
               [&](int k, OElem p) { out[(size_t)(k + 1)].on_b1 = std::move(p); });

    int floor_deg = -bar.depth();
    for (auto& d : out)
        d.cert_min = floor_deg;
    for (int i = 0; i >= floor_deg; --i) {
        bool ok = true;
        std::map<int, std::map<std::vector<int>, OElem>> per_level;
        for (auto& mids : bar.free_generators(i)) {
            OElem gen;
            for (auto& [bw, c] : bar.generator_element(i, mids).c)
                gen.add(OWord{{OGen::bg(bw)}}, c);
            try {
                OElem val = conj_value(gen);
                split_into(val, 0, [&](int k, OElem p) { per_level[k][mids] = std::move(p); });
            } catch (const TruncationError&) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            for (auto& d : out)
                d.cert_min = i + 1;
            break;
        }
        for (int k = -1; k <= maxlevel; ++k)
            out[(size_t)(k + 1)].on_b[i] = std::move(per_level[k]);
    }
    return out;
}

Integration Integrator::act_gauge(const GaugeElt& g, const Integration& I) const {
    auto levels = conjugate_all(g, I, I.order);
    if (!dc_.equal_within(levels[0], dc_.Dm1_cached(), levels[0].cert_min))
        throw ValidationError("act_gauge: conjugation moved D_{-1}");
    if (!dc_.equal_within(levels[1], I.D0, levels[1].cert_min))
        throw ValidationError("act_gauge: conjugation moved D_0");
    Integration J;
    J.D0 = I.D0;
    J.order = I.order;
    J.bar_depth = I.bar_depth;
    for (int k = 1; k <= I.order; ++k) {
        Derivation& dk = levels[(size_t)(k + 1)];
        DerCalc::JReport rep;
        if (!dc_.in_Jkn(dk, k, k + 2, &rep))
            throw ValidationError("act_gauge: conjugated level " + std::to_string(k) +
                                  " fails its J tag: " + rep.detail);
        J.higher.push_back(std::move(dk));
    }
    return J;
}

GaugeElt Integrator::gauge(const Integration& Ip, const Integration& Ipp, int K) const {
    if (!dc_.equal_within(Ip.D0, Ipp.D0, std::max(Ip.D0.cert_min, Ipp.D0.cert_min)))
        throw ValidationError("gauge: integrations do not share D_0");
    if (Ip.order < K || Ipp.order < K)
        throw TruncationError("gauge: integrations certified below the requested order", K);
    GaugeElt g;
    for (int m = 1; m <= K; ++m) {
        Derivation conj_m = conjugate_all(g, Ipp, m)[(size_t)(m + 1)];
        Derivation diff = dc_.add(Ip.D(m), dc_.scale(conj_m, Scalar(-1)));
        if (diff.is_zero_within(diff.cert_min))
            continue;  // already matched at this level
        Derivation nb = dc_.nabla(diff);
        if (!nb.is_zero_within(nb.cert_min))
            throw ValidationError("gauge: level difference is not a cycle");
        g.factors.push_back(solve_nabla(diff));
    }
    return g;
}

Derivation Integrator::cocycle_from_class(const OElem& v_part, const OElem& b1_part,
                                          int n) const {
    const OdotCalc& oc = dc_.odot();
    const BarModule& bar = oc.bar();
    auto invariant = [&](const OElem& x) {
        for (int i = 0; i < oc.algebra().dim; ++i) {
            OElem d = oc.bullet_left(SparseVec::unitvec(i), x);
            d.axpy(Scalar(-1), oc.bullet_right(x, SparseVec::unitvec(i)));
            if (!d.is_zero())
                return false;
        }
        return true;
    };
    if (!invariant(v_part) || !invariant(b1_part))
        throw ValidationError("cocycle_from_class: parts must be invariant elements");

    Derivation theta;
    theta.deg = n - 1;
    theta.xv_shift = n - 1;
    theta.bg_shift = 0;
    theta.on_v = v_part;
    theta.on_b1 = b1_part;
    Scalar s(((n - 1) % 2) ? -1 : 1);
    const Derivation& dm1 = dc_.Dm1_cached();
    theta.cert_min = 1;
    for (int i = 0; i >= -bar.depth(); --i) {
        std::map<std::vector<int>, OElem> level;
        for (auto& mids : bar.free_generators(i)) {
            OElem dgen;
            for (auto& [bw, c] : bar.d_bar(bar.generator_element(i, mids)).c)
                dgen.add(OWord{{OGen::bg(bw)}}, c);
            OElem t = dc_.evaluate(theta, dgen).scaled(s);
            if (!dc_.evaluate(dm1, t).is_zero())
                throw ValidationError("cocycle_from_class: transport not closed");
            level[mids] = H(t);
        }
        theta.on_b[i] = std::move(level);
        theta.cert_min = i;
    }
    Derivation nb = dc_.nabla(theta);
    if (!nb.is_zero_within(nb.cert_min))
        throw ValidationError("cocycle_from_class: result is not a cycle");
    return theta;
}

}  // namespace odot
