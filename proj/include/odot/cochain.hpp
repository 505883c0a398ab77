#pragma once

#include "odot/integrate.hpp"

namespace odot {

// Degree-n cochain: family of bimodule maps from the bar components into
// odot(upV). Degree homogeneity forces the value at bar degree i into
// odot^{i+1+n}(upV), so only i >= -n-1 can carry nonzero maps.
struct Cochain {
    int n = 0;
    OElem at_b1;  // value at the B_1 generator; must be invariant
    std::map<int, std::map<std::vector<int>, OElem>> at_b;  // bar degrees <= 0

    bool is_zero() const {
        if (!at_b1.is_zero())
            return false;
        for (auto& [i, level] : at_b)
            for (auto& [mids, v] : level)
                if (!v.is_zero())
                    return false;
        return true;
    }
};

struct CohomologyReport {
    int n = 0;
    int dim_c = 0, dim_z = 0, dim_b = 0, dim_h = 0;
    int order = 0, bar_depth = 0;
    std::string integration_id;
};

class CochainCalc {
  public:
    explicit CochainCalc(const Integrator& in) : in_(in), dc_(in.der()), oc_(dc_.odot()) {}

    // lowest bar degree a degree-n cochain can carry
    int live_floor(int n) const { return -n - 1 < -oc_.bar().depth() ? -oc_.bar().depth() : -n - 1; }

    // f on a single BG letter, through the bimodule structure; zero below the
    // live window
    OElem value_on_letter(const Cochain& f, const OGen& g) const;
    // f on a combination of bare BG-letter words
    OElem extend_gen(const Cochain& f, const OElem& gen) const;
    // f(u . beta . v) = (-1)^{n|u|} u . f(beta) . v on the one-BG component
    OElem extend(const Cochain& f, const OElem& x) const;

    // d(f) = f . D + (-1)^n d_C . f; requires I certified to order >= n+2
    Cochain differential(const Cochain& f, const Integration& I) const;

    // deterministic basis of C^n
    std::vector<Cochain> basis(int n) const;
    // coordinates in the basis order used by basis(n)
    SparseVec coords(const Cochain& f, int n) const;

    CohomologyReport cohomology(const Integration& I, int n) const;

    // Psi(f) = f . g: intertwines the differentials of the two integrations
    // connected by g
    Cochain psi(const GaugeElt& g, const Cochain& f) const;

  private:
    struct BasisIndex;
    const Integrator& in_;
    const DerCalc& dc_;
    const OdotCalc& oc_;
};

}  // namespace odot
