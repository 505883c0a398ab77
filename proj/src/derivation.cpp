#include "odot/derivation.hpp"

namespace odot {

bool Derivation::is_zero_within(int min_deg) const {
    if (has_v && !on_v.is_zero())
        return false;
    if (min_deg <= 1 && has_b1 && !on_b1.is_zero())
        return false;
    for (auto& [n, m] : on_b) {
        if (n < min_deg || n < cert_min)
            continue;
        for (auto& [mids, val] : m)
            if (!val.is_zero())
                return false;
    }
    return true;
}

OElem DerCalc::letter_value(const Derivation& d, const OGen& g) const {
    if (g.kind == 0) {
        if (!d.has_v)
            throw TruncationError("derivation value on V not certified", 0);
        return oc_.bullet_left(SparseVec::unitvec(g.idx), d.on_v);
    }
    int n = g.bar_degree();
    if (n == 1) {
        if (!d.has_b1 || d.cert_min > 1)
            throw TruncationError("derivation value on B_1 not certified", 0);
        return oc_.bullet_left(SparseVec::unitvec(g.bw[1]), d.on_b1);
    }
    if (n < d.cert_min)
        throw TruncationError("derivation value below certified window (bar degree " +
                                  std::to_string(n) + ")",
                              -n);
    auto itn = d.on_b.find(n);
    if (itn == d.on_b.end())
        throw TruncationError("derivation value missing at bar degree " + std::to_string(n), -n);
    std::vector<int> mids(g.bw.begin() + 2, g.bw.end() - 1);
    auto itw = itn->second.find(mids);
    if (itw == itn->second.end())
        throw ValidationError("derivation value missing for a free generator");
    OElem v = oc_.bullet_left(SparseVec::unitvec(g.bw[1]), itw->second);
    return oc_.bullet_right(v, SparseVec::unitvec(g.bw.back()));
}

OElem DerCalc::evaluate(const Derivation& d, const OElem& x) const {
    OElem r;
    std::map<OGen, OElem> cache;
    for (auto& [w, s] : x.c) {
        for (size_t t = 0; t < w.len(); ++t) {
            auto it = cache.find(w.L[t]);
            if (it == cache.end())
                it = cache.emplace(w.L[t], letter_value(d, w.L[t])).first;
            if (it->second.is_zero())
                continue;
            int e = d.deg * w.prefix_degree(t);
            Scalar sign((e % 2) ? -1 : 1);
            r.axpy(sign * s, oc_.insert_at(w, t, it->second));
        }
    }
    return r;
}

Derivation DerCalc::make_Dm1() const {
    Derivation d;
    d.deg = 1;
    d.xv_shift = 0;
    d.bg_shift = 1;
    d.cert_min = -bar_.depth();
    for (int n = 0; n >= -bar_.depth(); --n) {
        auto& level = d.on_b[n];
        for (auto& mids : bar_.free_generators(n)) {
            OElem val;
            for (auto& [bw, s] : bar_.d_bar(bar_.generator_element(n, mids)).c)
                val.add(OWord{{OGen::bg(bw)}}, s);
            level[mids] = std::move(val);
        }
    }
    return d;
}

const Derivation& DerCalc::Dm1_cached() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!dm1_)
        dm1_ = std::make_unique<Derivation>(make_Dm1());
    return *dm1_;
}

OElem DerCalc::lambda_word(const BarWord& w) const {
    int n = bar_deg(w);
    OElem r;
    if (n == 1) {
        for (auto& [jk, cd] : A_.comul[(size_t)w[1]].t.c) {
            auto pr = A_.tdecode(jk, 2);
            r.add(OWord{{OGen::xv(pr[0]), OGen::bg({1, pr[1]})}}, cd);
        }
        return r;
    }
    int m = -n;
    // state: (product basis index, bar letters chosen so far) -> coefficient
    std::map<std::pair<int, std::vector<int>>, Scalar> state;
    for (auto& [u, cu] : A_.unit.c)
        state[{u, {}}] = cu;
    for (int slot = 0; slot < m + 2; ++slot) {
        bool interior = slot >= 1 && slot <= m;
        SparseVec sl = interior ? A_.vbar_vec(w[(size_t)slot + 1])
                                : SparseVec::unitvec(slot == 0 ? w[1] : w.back());
        std::map<std::pair<int, std::vector<int>>, Scalar> nxt;
        for (auto& [key, c] : state) {
            for (auto& [i, ci] : sl.c) {
                for (auto& [jk, cd] : A_.comul[(size_t)i].t.c) {
                    auto pr = A_.tdecode(jk, 2);
                    // product leg: prod . Delta'(slot)
                    for (auto& [pp, cpp] : A_.mult[(size_t)key.first][(size_t)pr[0]].c) {
                        Scalar base = c * ci * cd * cpp;
                        if (base.is_zero())
                            continue;
                        if (!interior) {
                            auto letters = key.second;
                            letters.push_back(pr[1]);
                            auto [it, fresh] = nxt.emplace(std::make_pair(pp, letters), base);
                            if (!fresh)
                                it->second += base;
                        } else {
                            SparseVec coords = A_.vbar_coords(A_.pi(SparseVec::unitvec(pr[1])));
                            for (auto& [vb, cvb] : coords.c) {
                                auto letters = key.second;
                                letters.push_back(vb);
                                auto [it, fresh] =
                                    nxt.emplace(std::make_pair(pp, letters), base * cvb);
                                if (!fresh)
                                    it->second += base * cvb;
                            }
                        }
                    }
                }
            }
        }
        state = std::move(nxt);
    }
    for (auto& [key, c] : state) {
        if (c.is_zero())
            continue;
        BarWord nw;
        nw.push_back(n);
        for (int x : key.second)
            nw.push_back(x);
        r.add(OWord{{OGen::xv(key.first), OGen::bg(nw)}}, c);
    }
    return r;
}

OElem DerCalc::rho_word(const BarWord& w) const {
    int n = bar_deg(w);
    OElem r;
    if (n == 1) {
        for (auto& [jk, cd] : A_.comul[(size_t)w[1]].t.c) {
            auto pr = A_.tdecode(jk, 2);
            r.add(OWord{{OGen::bg({1, pr[0]}), OGen::xv(pr[1])}}, cd);
        }
        return r;
    }
    int m = -n;
    std::map<std::pair<int, std::vector<int>>, Scalar> state;
    for (auto& [u, cu] : A_.unit.c)
        state[{u, {}}] = cu;
    for (int slot = 0; slot < m + 2; ++slot) {
        bool interior = slot >= 1 && slot <= m;
        SparseVec sl = interior ? A_.vbar_vec(w[(size_t)slot + 1])
                                : SparseVec::unitvec(slot == 0 ? w[1] : w.back());
        std::map<std::pair<int, std::vector<int>>, Scalar> nxt;
        for (auto& [key, c] : state) {
            for (auto& [i, ci] : sl.c) {
                for (auto& [jk, cd] : A_.comul[(size_t)i].t.c) {
                    auto pr = A_.tdecode(jk, 2);
                    // bar letter from Delta', product from Delta''
                    for (auto& [pp, cpp] : A_.mult[(size_t)key.first][(size_t)pr[1]].c) {
                        Scalar base = c * ci * cd * cpp;
                        if (base.is_zero())
                            continue;
                        if (!interior) {
                            auto letters = key.second;
                            letters.push_back(pr[0]);
                            auto [it, fresh] = nxt.emplace(std::make_pair(pp, letters), base);
                            if (!fresh)
                                it->second += base;
                        } else {
                            SparseVec coords = A_.vbar_coords(A_.pi(SparseVec::unitvec(pr[0])));
                            for (auto& [vb, cvb] : coords.c) {
                                auto letters = key.second;
                                letters.push_back(vb);
                                auto [it, fresh] =
                                    nxt.emplace(std::make_pair(pp, letters), base * cvb);
                                if (!fresh)
                                    it->second += base * cvb;
                            }
                        }
                    }
                }
            }
        }
        state = std::move(nxt);
    }
    for (auto& [key, c] : state) {
        if (c.is_zero())
            continue;
        BarWord nw;
        nw.push_back(n);
        for (int x : key.second)
            nw.push_back(x);
        r.add(OWord{{OGen::bg(nw), OGen::xv(key.first)}}, c);
    }
    return r;
}

OElem DerCalc::lambda_elem(const BarElem& x) const {
    OElem r;
    for (auto& [w, s] : x.c)
        r.axpy(s, lambda_word(w));
    return r;
}

OElem DerCalc::rho_elem(const BarElem& x) const {
    OElem r;
    for (auto& [w, s] : x.c)
        r.axpy(s, rho_word(w));
    return r;
}

Derivation DerCalc::make_D0() const {
    Derivation d;
    d.deg = 1;
    d.xv_shift = 1;
    d.bg_shift = 0;
    d.cert_min = -bar_.depth();
    // on V: (up (x) up)(Delta)(down)
    for (auto& [u, cu] : A_.unit.c)
        for (auto& [jk, cd] : A_.comul[(size_t)u].t.c) {
            auto pr = A_.tdecode(jk, 2);
            d.on_v.add(OWord{{OGen::xv(pr[0]), OGen::xv(pr[1])}}, cu * cd);
        }
    // on B_1 at the generator 1_V: lambda - rho (the rho leg passes a degree-1
    // bar letter under the suspensions)
    for (auto& [u, cu] : A_.unit.c) {
        d.on_b1.axpy(cu, lambda_word({1, u}));
        d.on_b1.axpy(-cu, rho_word({1, u}));
    }
    // on B_n, n <= 0: lambda + (-1)^n rho
    for (int n = 0; n >= -bar_.depth(); --n) {
        auto& level = d.on_b[n];
        Scalar rs((n % 2) ? -1 : 1);
        for (auto& mids : bar_.free_generators(n)) {
            BarElem gen = bar_.generator_element(n, mids);
            OElem val = lambda_elem(gen);
            val.axpy(rs, rho_elem(gen));
            level[mids] = std::move(val);
        }
    }
    return d;
}

Derivation DerCalc::comp_oi(const Derivation& omega, const Derivation& theta, int i) const {
    int n = theta.arity();
    if (i < 1 || i > n)
        throw ValidationError("comp_oi: slot out of range");
    Derivation r;
    r.deg = omega.deg + theta.deg;
    r.xv_shift = omega.xv_shift + theta.xv_shift;
    r.bg_shift = omega.bg_shift + theta.bg_shift;
    r.cert_min = -bar_.depth();

    auto apply = [&](const OElem& val) {
        OElem out;
        for (auto& [w, s] : val.c) {
            size_t slot = (size_t)i - 1;
            OElem lv = letter_value(omega, w.L[slot]);
            int e = omega.deg * w.prefix_degree(slot);
            Scalar sign((e % 2) ? -1 : 1);
            out.axpy(sign * s, oc_.insert_at(w, slot, lv));
        }
        return out;
    };

    if (theta.has_v && omega.has_v) {
        try {
            r.on_v = apply(theta.on_v);
        } catch (const TruncationError&) {
            r.has_v = false;
        }
    } else {
        r.has_v = false;
    }
    if (theta.has_b1 && theta.cert_min <= 1) {
        try {
            r.on_b1 = apply(theta.on_b1);
        } catch (const TruncationError&) {
            r.has_b1 = false;
            r.cert_min = 2;
        }
    } else {
        r.has_b1 = false;
        r.cert_min = 2;
    }
    if (r.cert_min != 2) {
        for (int d = 0; d >= -bar_.depth(); --d) {
            if (d < theta.cert_min) {
                r.cert_min = d + 1;
                break;
            }
            auto itn = theta.on_b.find(d);
            if (itn == theta.on_b.end()) {
                r.cert_min = d + 1;
                break;
            }
            bool ok = true;
            std::map<std::vector<int>, OElem> level;
            for (auto& [mids, val] : itn->second) {
                try {
                    level[mids] = apply(val);
                } catch (const TruncationError&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                r.cert_min = d + 1;
                break;
            }
            r.on_b[d] = std::move(level);
        }
    }
    return r;
}

Derivation DerCalc::commutator(const Derivation& a, const Derivation& b) const {
    Derivation r;
    r.deg = a.deg + b.deg;
    r.xv_shift = a.xv_shift + b.xv_shift;
    r.bg_shift = a.bg_shift + b.bg_shift;
    r.cert_min = -bar_.depth();
    Scalar sgn(((a.deg * b.deg) % 2) ? -1 : 1);

    auto both = [&](const OElem& gen) {
        OElem v = evaluate(a, evaluate(b, gen));
        v.axpy(-sgn, evaluate(b, evaluate(a, gen)));
        return v;
    };

    OElem genV;
    for (auto& [u, cu] : A_.unit.c)
        genV.add(OWord{{OGen::xv(u)}}, cu);
    try {
        r.on_v = both(genV);
    } catch (const TruncationError&) {
        r.has_v = false;
    }

    OElem genB1;
    for (auto& [u, cu] : A_.unit.c)
        genB1.add(OWord{{OGen::bg({1, u})}}, cu);
    try {
        r.on_b1 = both(genB1);
    } catch (const TruncationError&) {
        r.has_b1 = false;
        r.cert_min = 2;
    }
    if (r.cert_min != 2) {
        for (int d = 0; d >= -bar_.depth(); --d) {
            bool ok = true;
            std::map<std::vector<int>, OElem> level;
            for (auto& mids : bar_.free_generators(d)) {
                OElem gen;
                for (auto& [bw, s] : bar_.generator_element(d, mids).c)
                    gen.add(OWord{{OGen::bg(bw)}}, s);
                try {
                    level[mids] = both(gen);
                } catch (const TruncationError&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                r.cert_min = d + 1;
                break;
            }
            r.on_b[d] = std::move(level);
        }
    }
    return r;
}

Derivation DerCalc::diamond(const Derivation& a, const Derivation& b) const {
    Derivation acc = zero_like(a.deg + b.deg, a.xv_shift + b.xv_shift, a.bg_shift + b.bg_shift);
    for (int i = 1; i <= b.arity(); ++i)
        acc = add(acc, comp_oi(a, b, i));
    return acc;
}

Derivation DerCalc::bracket_via_diamond(const Derivation& a, const Derivation& b) const {
    int aa = a.arity(), pp = a.level(), bb = b.arity(), qq = b.level();
    int e = (aa + pp + 1) * (bb + qq + 1);
    Derivation d2 = diamond(b, a);
    if (e % 2 == 0)
        d2 = scale(d2, Scalar(-1));
    return add(diamond(a, b), d2);
}

bool DerCalc::in_Jkn(const Derivation& t, int k, int n, JReport* rep) const {
    auto fail = [&](const std::string& s) {
        if (rep) {
            rep->pass = false;
            rep->detail = s;
        }
        return false;
    };
    if (n < 2 || k < 0)
        return fail("J_k(n) needs n >= 2, k >= 0");
    if (t.arity() != n)
        return fail("count shift " + std::to_string(t.xv_shift) + " != n-1");
    if (t.deg != n - 1 - k)
        return fail("operator degree != n-1-k");
    if (t.has_v)
        for (auto& [w, s] : t.on_v.c)
            if (w.xv_count() != n || w.bg_count() != 0)
                return fail("on_v image outside odot^n(V)");
    if (t.has_b1)
        for (auto& [w, s] : t.on_b1.c) {
            if (w.xv_count() != n - 1 || w.bg_count() != 1)
                return fail("on_b1 image outside odot^{n-1,1}");
            if (w.L[(size_t)w.bg_slot()].bar_degree() != 1 - k)
                return fail("on_b1 image at wrong bar degree");
        }
    for (auto& [d, level] : t.on_b) {
        if (d < t.cert_min)
            continue;
        for (auto& [mids, val] : level)
            for (auto& [w, s] : val.c) {
                if (w.xv_count() != n - 1 || w.bg_count() != 1)
                    return fail("on_b image outside odot^{n-1,1}");
                if (w.L[(size_t)w.bg_slot()].bar_degree() != d - k)
                    return fail("on_b image at wrong bar degree");
            }
    }
    if (k == 0) {
        Derivation nb = nabla(t);
        if (!nb.is_zero_within(nb.cert_min))
            return fail("[D_{-1}, theta] != 0");
    } else {
        if (t.has_b1 && !t.on_b1.is_zero())
            return fail("theta|_{B_1} != 0 for k >= 1");
        if (t.has_v && !t.on_v.is_zero())
            return fail("theta|_{V} != 0 for k >= 1");
    }
    return true;
}

Derivation DerCalc::add(const Derivation& a, const Derivation& b) const {
    if (a.deg != b.deg || a.xv_shift != b.xv_shift || a.bg_shift != b.bg_shift)
        throw ValidationError("derivation add: grading mismatch");
    Derivation r = a;
    r.cert_min = std::max(a.cert_min, b.cert_min);
    r.has_v = a.has_v && b.has_v;
    r.has_b1 = a.has_b1 && b.has_b1;
    if (r.has_v)
        r.on_v.axpy(Scalar(1), b.on_v);
    else
        r.on_v = OElem();
    if (r.has_b1)
        r.on_b1.axpy(Scalar(1), b.on_b1);
    else
        r.on_b1 = OElem();
    for (auto it = r.on_b.begin(); it != r.on_b.end();) {
        if (it->first < r.cert_min)
            it = r.on_b.erase(it);
        else
            ++it;
    }
    for (auto& [d, level] : b.on_b) {
        if (d < r.cert_min)
            continue;
        for (auto& [mids, val] : level)
            r.on_b[d][mids].axpy(Scalar(1), val);
    }
    return r;
}

Derivation DerCalc::scale(const Derivation& a, const Scalar& s) const {
    Derivation r = a;
    r.on_v = a.on_v.scaled(s);
    r.on_b1 = a.on_b1.scaled(s);
    for (auto& [d, level] : r.on_b)
        for (auto& [mids, val] : level)
            val = val.scaled(s);
    return r;
}

Derivation DerCalc::zero_like(int deg, int xv_shift, int bg_shift) const {
    Derivation r;
    r.deg = deg;
    r.xv_shift = xv_shift;
    r.bg_shift = bg_shift;
    r.cert_min = -bar_.depth();
    for (int n = 0; n >= -bar_.depth(); --n) {
        auto& level = r.on_b[n];
        for (auto& mids : bar_.free_generators(n))
            level[mids] = OElem();
    }
    return r;
}

bool DerCalc::equal_within(const Derivation& a, const Derivation& b, int min_deg) const {
    if (a.has_v && b.has_v && !(a.on_v == b.on_v))
        return false;
    if (min_deg <= 1 && a.has_b1 && b.has_b1 && !(a.on_b1 == b.on_b1))
        return false;
    int lo = std::max({min_deg, a.cert_min, b.cert_min});
    for (int d = 0; d >= lo && d >= -bar_.depth(); --d) {
        auto ia = a.on_b.find(d), ib = b.on_b.find(d);
        if ((ia == a.on_b.end()) != (ib == b.on_b.end()))
            return false;
        if (ia == a.on_b.end())
            continue;
        if (!(ia->second == ib->second))
            return false;
    }
    return true;
}

}  // namespace odot
