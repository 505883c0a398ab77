#include "odot/bar.hpp"

namespace odot {

BarElem BarModule::d_bar_word(const BarWord& w) const {
    int n = bar_deg(w);
    if (n == 1)
        throw ValidationError("d_bar: no differential out of B_1");
    BarElem r;
    if (n == 0) {
        // (a0|a1) -> a0.a1 in B_1 = V
        for (auto& [k, s] : A_.mult[(size_t)w[1]][(size_t)w[2]].c)
            r.add({1, k}, s);
        return r;
    }
    int m = -n;  // number of interior letters
    // slots: w[1]=a0, w[2..m+1]=interior, w[m+2]=a1
    // i = 0: outer-left times first interior
    {
        SparseVec prod = A_.mul(SparseVec::unitvec(w[1]), A_.vbar_vec(w[2]));
        for (auto& [k, s] : prod.c) {
            BarWord nw;
            nw.push_back(n + 1);
            nw.push_back(k);
            for (int t = 3; t <= m + 2; ++t)
                nw.push_back(w[(size_t)t]);
            r.add(nw, s);
        }
    }
    // i = 1..m-1: interior times interior, re-normalized by pi
    for (int i = 1; i <= m - 1; ++i) {
        SparseVec prod = A_.mul(A_.vbar_vec(w[(size_t)i + 1]), A_.vbar_vec(w[(size_t)i + 2]));
        SparseVec coords = A_.vbar_coords(A_.pi(prod));
        Scalar sign((i % 2) ? -1 : 1);
        for (auto& [k, s] : coords.c) {
            BarWord nw;
            nw.push_back(n + 1);
            nw.push_back(w[1]);
            for (int t = 1; t <= m; ++t) {
                if (t == i)
                    nw.push_back(k);
                else if (t < i)
                    nw.push_back(w[(size_t)t + 1]);
                else if (t > i + 1)
                    nw.push_back(w[(size_t)t + 1]);
            }
            nw.push_back(w[(size_t)m + 2]);
            r.add(nw, sign * s);
        }
    }
    // i = m: last interior times outer-right
    {
        SparseVec prod =
            A_.mul(A_.vbar_vec(w[(size_t)m + 1]), SparseVec::unitvec(w[(size_t)m + 2]));
        Scalar sign((m % 2) ? -1 : 1);
        for (auto& [k, s] : prod.c) {
            BarWord nw;
            nw.push_back(n + 1);
            nw.push_back(w[1]);
            for (int t = 2; t <= m; ++t)
                nw.push_back(w[(size_t)t]);
            nw.push_back(k);
            r.add(nw, sign * s);
        }
    }
    return r;
}

BarElem BarModule::d_bar(const BarElem& x) const {
    BarElem r;
    for (auto& [w, s] : x.c)
        r.axpy(s, d_bar_word(w));
    return r;
}

BarElem BarModule::act_left_basis(int i, const BarWord& w) const {
    BarElem r;
    for (auto& [k, s] : A_.mult[(size_t)i][(size_t)w[1]].c) {
        BarWord nw = w;
        nw[1] = k;
        r.add(nw, s);
    }
    return r;
}

BarElem BarModule::act_right_basis(const BarWord& w, int i) const {
    BarElem r;
    size_t last = w.size() - 1;  // for B_1 this is the single V slot
    for (auto& [k, s] : A_.mult[(size_t)w[last]][(size_t)i].c) {
        BarWord nw = w;
        nw[last] = k;
        r.add(nw, s);
    }
    return r;
}

BarElem BarModule::act_left(const SparseVec& u, const BarElem& x) const {
    BarElem r;
    for (auto& [i, cu] : u.c)
        for (auto& [w, s] : x.c)
            r.axpy(cu * s, act_left_basis(i, w));
    return r;
}

BarElem BarModule::act_right(const BarElem& x, const SparseVec& u) const {
    BarElem r;
    for (auto& [i, cu] : u.c)
        for (auto& [w, s] : x.c)
            r.axpy(cu * s, act_right_basis(w, i));
    return r;
}

BarElem BarModule::contract_h_word(const BarWord& w, Homotopy strategy) const {
    int n = bar_deg(w);
    if (n - 1 < -T_)
        throw TruncationError("contract_h: would leave the truncation window (need T >= " +
                                  std::to_string(-(n - 1)) + ")",
                              -(n - 1));
    BarElem r;
    if (strategy == Homotopy::Left) {
        if (n == 1) {
            // v -> (1|v)
            for (auto& [u, cu] : A_.unit.c)
                r.add({0, u, w[1]}, cu);
            return r;
        }
        SparseVec coords = A_.vbar_coords(A_.pi(SparseVec::unitvec(w[1])));
        for (auto& [k, s] : coords.c)
            for (auto& [u, cu] : A_.unit.c) {
                BarWord nw;
                nw.push_back(n - 1);
                nw.push_back(u);
                nw.push_back(k);
                for (size_t t = 2; t < w.size(); ++t)
                    nw.push_back(w[t]);
                r.add(nw, s * cu);
            }
        return r;
    }
    // right-sided variant, sign (-1)^{1-n}
    if (n == 1) {
        for (auto& [u, cu] : A_.unit.c)
            r.add({0, w[1], u}, cu);
        return r;
    }
    Scalar sign(((1 - n) % 2) ? -1 : 1);
    size_t last = w.size() - 1;
    SparseVec coords = A_.vbar_coords(A_.pi(SparseVec::unitvec(w[last])));
    for (auto& [k, s] : coords.c)
        for (auto& [u, cu] : A_.unit.c) {
            BarWord nw;
            nw.push_back(n - 1);
            for (size_t t = 1; t < last; ++t)
                nw.push_back(w[t]);
            nw.push_back(k);
            nw.push_back(u);
            r.add(nw, sign * s * cu);
        }
    return r;
}

BarElem BarModule::contract_h(const BarElem& x, Homotopy strategy) const {
    BarElem r;
    for (auto& [w, s] : x.c)
        r.axpy(s, contract_h_word(w, strategy));
    return r;
}

std::vector<BarWord> BarModule::basis(int n) const {
    if (n > 1 || n < -T_)
        throw ValidationError("bar basis: degree out of window");
    std::vector<BarWord> out;
    if (n == 1) {
        for (int i = 0; i < A_.dim; ++i)
            out.push_back({1, i});
        return out;
    }
    int m = -n;
    int vb = A_.vbar_dim();
    if (m > 0 && vb == 0)
        return out;
    std::vector<int> mids((size_t)m, 0);
    while (true) {
        for (int a0 = 0; a0 < A_.dim; ++a0)
            for (int a1 = 0; a1 < A_.dim; ++a1) {
                BarWord w;
                w.push_back(n);
                w.push_back(a0);
                for (int x : mids)
                    w.push_back(x);
                w.push_back(a1);
                out.push_back(std::move(w));
            }
        if (m == 0)
            break;
        int t = m - 1;
        while (t >= 0 && ++mids[(size_t)t] == vb) {
            mids[(size_t)t] = 0;
            --t;
        }
        if (t < 0)
            break;
    }
    return out;
}

std::vector<std::vector<int>> BarModule::free_generators(int n) const {
    if (n > 0 || n < -T_)
        throw ValidationError("free_generators: degree must be in [-T, 0]");
    int m = -n, vb = A_.vbar_dim();
    std::vector<std::vector<int>> out;
    if (m == 0)
        return {{}};
    if (vb == 0)
        return {};
    std::vector<int> mids((size_t)m, 0);
    while (true) {
        out.push_back(mids);
        int t = m - 1;
        while (t >= 0 && ++mids[(size_t)t] == vb) {
            mids[(size_t)t] = 0;
            --t;
        }
        if (t < 0)
            break;
    }
    return out;
}

BarElem BarModule::generator_element(int n, const std::vector<int>& mids) const {
    if ((int)mids.size() != -n)
        throw ValidationError("generator_element: wrong interior length");
    BarElem r;
    for (auto& [u, cu] : A_.unit.c)
        for (auto& [v, cv] : A_.unit.c) {
            BarWord w;
            w.push_back(n);
            w.push_back(u);
            for (int x : mids)
                w.push_back(x);
            w.push_back(v);
            r.add(w, cu * cv);
        }
    return r;
}

}  // namespace odot
