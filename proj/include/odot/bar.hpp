#pragma once

#include <vector>

#include "odot/algebra.hpp"

namespace odot {

// Word of the normalized two-sided bar resolution with the opposite grading:
// degree 1 = V, degree 0 = V x V, degree n <= -1 = V x Vbar^{-n} x V.
// Encoding: [deg, a0] for deg 1; [deg, a0, mids..., a1] otherwise, outer
// letters V basis indices, interior letters Vbar basis indices.
using BarWord = std::vector<int>;

inline int bar_deg(const BarWord& w) { return w[0]; }

struct BarElem {
    std::map<BarWord, Scalar> c;

    bool is_zero() const { return c.empty(); }
    void add(const BarWord& w, const Scalar& s) {
        if (s.is_zero())
            return;
        auto [it, fresh] = c.emplace(w, s);
        if (!fresh) {
            it->second += s;
            if (it->second.is_zero())
                c.erase(it);
        }
    }
    void axpy(const Scalar& a, const BarElem& o) {
        if (a.is_zero())
            return;
        for (auto& [w, s] : o.c)
            add(w, a * s);
    }
    BarElem scaled(const Scalar& a) const {
        BarElem r;
        r.axpy(a, *this);
        return r;
    }
    bool operator==(const BarElem& o) const { return c == o.c; }
};

enum class Homotopy { Left, Right };

class BarModule {
  public:
    BarModule(const Drinfeld& A, int T) : A_(A), T_(T) {
        if (T < 1)
            throw ValidationError("bar depth T must be >= 1");
    }

    const Drinfeld& algebra() const { return A_; }
    int depth() const { return T_; }

    // alternating sum of adjacent multiplications; interior slots re-normalized
    // through pi. Degree-1 input is an error: nothing maps out of B_1.
    BarElem d_bar(const BarElem& x) const;
    BarElem d_bar_word(const BarWord& w) const;

    // outer bimodule action u . x . w (either side may be the unit)
    BarElem act_left(const SparseVec& u, const BarElem& x) const;
    BarElem act_right(const BarElem& x, const SparseVec& w) const;
    BarElem act_left_basis(int i, const BarWord& w) const;
    BarElem act_right_basis(const BarWord& w, int i) const;

    // contracting homotopy, certified for degrees 1 down to -T+1
    BarElem contract_h(const BarElem& x, Homotopy strategy) const;
    BarElem contract_h_word(const BarWord& w, Homotopy strategy) const;

    // basis of B_n as words; free generators of B_n (n <= 0) as interior words
    std::vector<BarWord> basis(int n) const;
    std::vector<std::vector<int>> free_generators(int n) const;
    // the element (1|mids|1) of B_n, outer units expanded in coordinates
    BarElem generator_element(int n, const std::vector<int>& mids) const;

  private:
    const Drinfeld& A_;
    int T_;
};

}  // namespace odot
