#pragma once

#include "odot/derivation.hpp"

namespace odot {

struct ObstructionClass {
    OElem v_part;   // theta|_V(1) in odot^n(V)_I
    OElem b1_part;  // theta_1(1) in odot^{n-1,1}(V,B_1)_I
    bool is_zero() const { return v_part.is_zero() && b1_part.is_zero(); }
};

struct ObstructionError : Error {
    ObstructionClass cls;
    ObstructionError(const std::string& m, ObstructionClass c) : Error(m), cls(std::move(c)) {}
};

// D = D_{-1} + D_0 + D_1 + ... + D_K with Eq-(9) certified for m <= K
// within the bar window.
struct Integration {
    Derivation D0;
    std::vector<Derivation> higher;  // D_1 .. D_K
    int order = 0;
    int bar_depth = 0;

    const Derivation& D(int k) const {
        if (k == 0)
            return D0;
        return higher.at((size_t)k - 1);
    }
};

// Pro-unipotent gauge g = exp(f_m) ... exp(f_1), each f raising XV count
// by >= 2.
struct GaugeElt {
    // g = exp(factors.back()) o ... o exp(factors.front()): the earliest
    // factor is applied first. The inverse applies exp(-f) in reverse order.
    std::vector<Derivation> factors;
    bool negated = false;
    bool is_identity() const { return factors.empty(); }
    GaugeElt inverse() const {
        GaugeElt r;
        r.factors = factors;
        r.negated = !negated;
        return r;
    }
};

struct McReport {
    bool pass = true;
    int window_min = 0;  // identity checked for bar degrees >= this
    std::string detail;
};

class Integrator {
  public:
    Integrator(const DerCalc& dc, Homotopy strategy) : dc_(dc), strategy_(strategy) {}

    const DerCalc& der() const { return dc_; }

    // slotwise contracting homotopy on odot^{n-1,1}(V,B): (-1)^{slot} times
    // the bar homotopy in the B slot; DH + HD = id on the certified window
    OElem H(const OElem& x) const;

    // class of a nabla-cycle in J_0(n); error when the input is not a cycle
    ObstructionClass obstruction_class(const Derivation& theta) const;

    // chi in J_{k+1}(n) with nabla(chi) = theta, by the downward diagram
    // chase; self-checks the postcondition on every certified generator
    Derivation solve_nabla(const Derivation& theta) const;

    Integration integrate(const Derivation& D0, int K) const;

    McReport verify_mc(const Integration& I, int m) const;

    // free comp-algebra map with m(e_n) = D_n, through the suspension twist
    DerLevelElem operad_eval(const Integration& I, const TreeChain& ch) const;
    bool operad_chain_check(const Integration& I, int n) const;

    // exp-factor application; cap bounds the XV count of retained words, and
    // words whose BG letter falls below bg_floor are dropped (sound whenever
    // the consumer ignores them: the factors only lower BG degrees)
    OElem gauge_apply(const GaugeElt& g, const OElem& x, int cap,
                      int bg_floor = INT_MIN / 2) const;
    Integration act_gauge(const GaugeElt& g, const Integration& I) const;
    GaugeElt gauge(const Integration& Ip, const Integration& Ipp, int K) const;

    // Prop-12 surjectivity witness: a nabla-cocycle in J_0(n) whose class is
    // exactly (v_part, b1_part); both inputs must be invariant
    Derivation cocycle_from_class(const OElem& v_part, const OElem& b1_part, int n) const;

  private:
    Derivation conjugate_level(const GaugeElt& g, const Integration& I, int k) const;
    std::vector<Derivation> conjugate_all(const GaugeElt& g, const Integration& I,
                                          int maxlevel) const;

    const DerCalc& dc_;
    Homotopy strategy_;
};

}  // namespace odot
