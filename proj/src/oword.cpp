#include "odot/oword.hpp"

#include <algorithm>
#include <functional>

namespace odot {

namespace {

size_t subtree_end(const std::vector<int>& code, size_t pos) {
    int need = 1;
    while (need > 0) {
        need += code[pos] - 1;
        ++pos;
    }
    return pos;
}

OWord concat(const OWord& a, const OWord& b) {
    OWord r = a;
    r.L.insert(r.L.end(), b.L.begin(), b.L.end());
    return r;
}

}  // namespace

std::string OWord::str(const Drinfeld& A) const {
    if (L.empty())
        return "1";
    std::string s;
    for (auto& g : L) {
        if (g.kind == 0) {
            s += "[" + A.names[(size_t)g.idx] + "]";
        } else {
            s += "[B" + std::to_string(bar_deg(g.bw)) + ":";
            for (size_t t = 1; t < g.bw.size(); ++t) {
                if (t > 1)
                    s += "|";
                s += std::to_string(g.bw[t]);
            }
            s += "]";
        }
    }
    return s;
}

std::string OElem::str(const Drinfeld& A) const {
    if (c.empty())
        return "0";
    std::string s;
    for (auto& [w, x] : c) {
        if (!s.empty())
            s += " + ";
        s += x.str() + "*" + w.str(A);
    }
    return s;
}

OdotCalc::OdotCalc(const Drinfeld& A, const BarModule& bar) : A_(A), bar_(bar) {
    trivial_phi_ = A.phi_is_trivial();
}

OElem OdotCalc::bullet_left_basis(int i, const OWord& w) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = bl_memo_.find({i, w});
        if (it != bl_memo_.end())
            return it->second;
    }
    OElem r;
    if (w.L.empty()) {
        r.add(OWord{}, A_.counit[(size_t)i]);
    } else if (w.len() == 1) {
        const OGen& g = w.L[0];
        if (g.kind == 0) {
            for (auto& [k, s] : A_.mult[(size_t)i][(size_t)g.idx].c)
                r.add(OWord{{OGen::xv(k)}}, s);
        } else {
            for (auto& [bw, s] : bar_.act_left_basis(i, g.bw).c)
                r.add(OWord{{OGen::bg(bw)}}, s);
        }
    } else {
        OWord pre = w;
        OGen last = pre.L.back();
        pre.L.pop_back();
        OWord lw{{last}};
        for (auto& [jk, cd] : A_.comul[(size_t)i].t.c) {
            auto pr = A_.tdecode(jk, 2);
            OElem a = bullet_left_basis(pr[0], pre);
            OElem b = bullet_left_basis(pr[1], lw);
            for (auto& [wa, ca] : a.c)
                for (auto& [wb, cb] : b.c)
                    r.add(concat(wa, wb), cd * ca * cb);
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    return bl_memo_.emplace(std::make_pair(i, w), std::move(r)).first->second;
}

OElem OdotCalc::bullet_right_basis(const OWord& w, int i) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = br_memo_.find({i, w});
        if (it != br_memo_.end())
            return it->second;
    }
    OElem r;
    if (w.L.empty()) {
        r.add(OWord{}, A_.counit[(size_t)i]);
    } else if (w.len() == 1) {
        const OGen& g = w.L[0];
        if (g.kind == 0) {
            for (auto& [k, s] : A_.mult[(size_t)g.idx][(size_t)i].c)
                r.add(OWord{{OGen::xv(k)}}, s);
        } else {
            for (auto& [bw, s] : bar_.act_right_basis(g.bw, i).c)
                r.add(OWord{{OGen::bg(bw)}}, s);
        }
    } else {
        OWord pre = w;
        OGen last = pre.L.back();
        pre.L.pop_back();
        OWord lw{{last}};
        for (auto& [jk, cd] : A_.comul[(size_t)i].t.c) {
            auto pr = A_.tdecode(jk, 2);
            OElem a = bullet_right_basis(pre, pr[0]);
            OElem b = bullet_right_basis(lw, pr[1]);
            for (auto& [wa, ca] : a.c)
                for (auto& [wb, cb] : b.c)
                    r.add(concat(wa, wb), cd * ca * cb);
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    return br_memo_.emplace(std::make_pair(i, w), std::move(r)).first->second;
}

OElem OdotCalc::bullet_left(const SparseVec& a, const OElem& x) const {
    OElem r;
    for (auto& [i, ca] : a.c)
        for (auto& [w, s] : x.c)
            r.axpy(ca * s, bullet_left_basis(i, w));
    return r;
}

OElem OdotCalc::bullet_right(const OElem& x, const SparseVec& a) const {
    OElem r;
    for (auto& [i, ca] : a.c)
        for (auto& [w, s] : x.c)
            r.axpy(ca * s, bullet_right_basis(w, i));
    return r;
}

OElem OdotCalc::mul_words(const OWord& u, const OWord& v) const {
    if (u.L.empty()) {
        OElem r;
        r.add(v, Scalar(1));
        return r;
    }
    if (v.L.empty() || v.len() == 1 || trivial_phi_) {
        OElem r;
        r.add(concat(u, v), Scalar(1));
        return r;
    }
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mul_memo_.find({u, v});
        if (it != mul_memo_.end())
            return it->second;
    }
    // u . (v' . l) = sum (((Pinv1.u).P1) . ((Pinv2.v').P2)) . ((Pinv3.l).P3)
    OWord vpre = v;
    OGen last = vpre.L.back();
    vpre.L.pop_back();
    OWord lw{{last}};
    OElem acc;
    for (auto& [ki, ci] : A_.phi_inv.t.c) {
        auto pqr = A_.tdecode(ki, 3);
        for (auto& [kp, cp] : A_.phi.t.c) {
            auto stz = A_.tdecode(kp, 3);
            Scalar coeff = ci * cp;
            OElem a = bullet_right(bullet_left_basis(pqr[0], u), SparseVec::unitvec(stz[0]));
            OElem b = bullet_right(bullet_left_basis(pqr[1], vpre), SparseVec::unitvec(stz[1]));
            OElem cl = bullet_right(bullet_left_basis(pqr[2], lw), SparseVec::unitvec(stz[2]));
            OElem ab = mul(a, b);
            for (auto& [wab, cab] : ab.c)
                for (auto& [wc, cc] : cl.c)
                    acc.add(concat(wab, wc), coeff * cab * cc);
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    return mul_memo_.emplace(std::make_pair(u, v), std::move(acc)).first->second;
}

OElem OdotCalc::mul(const OElem& x, const OElem& y) const {
    OElem r;
    for (auto& [u, cu] : x.c)
        for (auto& [v, cv] : y.c)
            r.axpy(cu * cv, mul_words(u, v));
    return r;
}

OElem OdotCalc::insert_at(const OWord& w, size_t slot, const OElem& val) const {
    if (slot >= w.len())
        throw ValidationError("insert_at: slot out of range");
    OWord pre;
    pre.L.assign(w.L.begin(), w.L.begin() + (long)slot);
    OElem acc;
    {
        OElem pe;
        pe.add(pre, Scalar(1));
        acc = mul(pe, val);
    }
    for (size_t t = slot + 1; t < w.len(); ++t) {
        OElem nxt;
        for (auto& [ww, cc] : acc.c) {
            OWord nw = ww;
            nw.L.push_back(w.L[t]);
            nxt.add(nw, cc);
        }
        acc = std::move(nxt);
    }
    return acc;
}

OElem OdotCalc::d_C_V(const OElem& x) const {
    OElem r;
    for (auto& [w, s] : x.c) {
        for (size_t t = 0; t < w.len(); ++t) {
            if (w.L[t].kind != 0)
                throw ValidationError("d_C_V: BG letter present");
            OElem block;
            for (auto& [jk, cd] : A_.comul[(size_t)w.L[t].idx].t.c) {
                auto pr = A_.tdecode(jk, 2);
                block.add(OWord{{OGen::xv(pr[0]), OGen::xv(pr[1])}}, cd);
            }
            Scalar sign((t % 2) ? -1 : 1);  // t XV letters passed, each degree 1
            r.axpy(sign * s, insert_at(w, t, block));
        }
    }
    return r;
}

JElem OdotCalc::to_tensor_J(const OElem& x) const {
    JElem r;
    for (auto& [w, s] : x.c) {
        Scalar sign(1);
        if (w.bg_count() == 1) {
            int slot = w.bg_slot();
            int nb = w.L[(size_t)slot].bar_degree();
            if ((slot * (1 - nb)) % 2)
                sign = Scalar(-1);
        }
        r.add(w, sign * s);
    }
    return r;
}

std::vector<OWord> OdotCalc::words_xv(int len) const {
    if (len == 0)
        return {OWord{}};
    std::vector<OWord> out;
    std::vector<int> idx((size_t)len, 0);
    while (true) {
        OWord w;
        for (int i : idx)
            w.L.push_back(OGen::xv(i));
        out.push_back(std::move(w));
        int t = len - 1;
        while (t >= 0 && ++idx[(size_t)t] == A_.dim) {
            idx[(size_t)t] = 0;
            --t;
        }
        if (t < 0)
            break;
    }
    return out;
}

std::vector<OWord> OdotCalc::words_one_bg(int nletters, int barDeg) const {
    std::vector<OWord> out;
    auto bwords = bar_.basis(barDeg);
    auto xvs = words_xv(nletters - 1);
    for (int slot = 0; slot < nletters; ++slot)
        for (auto& bw : bwords)
            for (auto& xw : xvs) {
                OWord w;
                for (int t = 0; t < nletters; ++t) {
                    if (t == slot)
                        w.L.push_back(OGen::bg(bw));
                    else
                        w.L.push_back(xw.L[(size_t)(t < slot ? t : t - 1)]);
                }
                out.push_back(std::move(w));
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<OElem> OdotCalc::invariant_basis(const std::vector<OWord>& component) const {
    std::map<OWord, int> index;
    for (int i = 0; i < (int)component.size(); ++i)
        index[component[(size_t)i]] = i;
    int n = (int)component.size();
    SparseMat M(A_.dim * n, n);
    for (int j = 0; j < n; ++j) {
        for (int cgen = 0; cgen < A_.dim; ++cgen) {
            OElem diff = bullet_left_basis(cgen, component[(size_t)j]);
            diff.axpy(Scalar(-1), bullet_right_basis(component[(size_t)j], cgen));
            for (auto& [w, s] : diff.c) {
                auto it = index.find(w);
                if (it == index.end())
                    throw ValidationError("invariant_basis: action leaves the component");
                int row = cgen * n + it->second;
                M.set(row, j, M.col[(size_t)j].get(row) + s);
            }
        }
    }
    std::vector<OElem> out;
    for (auto& k : kernel_basis(M)) {
        OElem e;
        for (auto& [i, s] : k.c)
            e.add(component[(size_t)i], s);
        out.push_back(std::move(e));
    }
    return out;
}

// --- bracketing-tree calculus ---

OTree OdotCalc::tree_of_word(const OWord& w, const Tree& bracketing) const {
    if (!bracketing.is_leaf() && !bracketing.is_binary())
        throw ValidationError("tree_of_word: bracketing must be binary");
    if (bracketing.leaf_count() != (int)w.len())
        throw ValidationError("tree_of_word: leaf count mismatch");
    OTree t;
    t.shape = bracketing.code;
    t.leaves = w.L;
    return t;
}

OTree OdotCalc::subtree(const OTree& t, bool right) const {
    if (t.shape.empty() || t.shape[0] != 2)
        throw ValidationError("subtree: not an internal node");
    size_t lend = subtree_end(t.shape, 1);
    OTree r;
    int lleaves = 0;
    for (size_t i = 1; i < lend; ++i)
        if (t.shape[i] == 0)
            ++lleaves;
    if (!right) {
        r.shape.assign(t.shape.begin() + 1, t.shape.begin() + (long)lend);
        r.leaves.assign(t.leaves.begin(), t.leaves.begin() + lleaves);
    } else {
        r.shape.assign(t.shape.begin() + (long)lend, t.shape.end());
        r.leaves.assign(t.leaves.begin() + lleaves, t.leaves.end());
    }
    return r;
}

OTree OdotCalc::join(const OTree& l, const OTree& r) const {
    OTree t;
    t.shape.push_back(2);
    t.shape.insert(t.shape.end(), l.shape.begin(), l.shape.end());
    t.shape.insert(t.shape.end(), r.shape.begin(), r.shape.end());
    t.leaves = l.leaves;
    t.leaves.insert(t.leaves.end(), r.leaves.begin(), r.leaves.end());
    return t;
}

OTreeElem OdotCalc::bullet_subtree(int i, const OTree& t, bool left_side) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = bullet_tree_memo_.find({left_side ? 0 : 1, i, t});
        if (it != bullet_tree_memo_.end())
            return it->second;
    }
    OTreeElem r;
    if (t.shape.size() == 1) {
        OWord w{{t.leaves[0]}};
        OElem e = left_side ? bullet_left_basis(i, w) : bullet_right_basis(w, i);
        for (auto& [ww, s] : e.c) {
            OTree lt;
            lt.shape = {0};
            lt.leaves = ww.L;
            r.add(lt, s);
        }
    } else {
        OTree L = subtree(t, false), R = subtree(t, true);
        for (auto& [jk, cd] : A_.comul[(size_t)i].t.c) {
            auto pr = A_.tdecode(jk, 2);
            OTreeElem a = bullet_subtree(pr[0], L, left_side);
            OTreeElem b = bullet_subtree(pr[1], R, left_side);
            for (auto& [ta, ca] : a.c)
                for (auto& [tb, cb] : b.c)
                    r.add(join(ta, tb), cd * ca * cb);
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    return bullet_tree_memo_.emplace(std::make_tuple(left_side ? 0 : 1, i, t), std::move(r))
        .first->second;
}

OTreeElem OdotCalc::bullet_left_tree(int i, const OTree& t) const {
    return bullet_subtree(i, t, true);
}

OTreeElem OdotCalc::bullet_right_tree(const OTree& t, int i) const {
    return bullet_subtree(i, t, false);
}

OTreeElem OdotCalc::move_at(const OTree& t, const std::vector<int>& path, int dir) const {
    if (!path.empty()) {
        OTree L = subtree(t, false), R = subtree(t, true);
        std::vector<int> rest(path.begin() + 1, path.end());
        OTreeElem inner = move_at(path[0] == 0 ? L : R, rest, dir);
        OTreeElem r;
        for (auto& [ti, s] : inner.c)
            r.add(path[0] == 0 ? join(ti, R) : join(L, ti), s);
        return r;
    }
    OTreeElem acc;
    if (dir > 0) {
        // x.(y.z) -> sum (((Pinv1.x).P1) . ((Pinv2.y).P2)) . ((Pinv3.z).P3)
        OTree x = subtree(t, false), yz = subtree(t, true);
        if (yz.shape.size() == 1)
            throw ValidationError("assoc_move: right child is a leaf (pattern mismatch)");
        OTree y = subtree(yz, false), z = subtree(yz, true);
        for (auto& [ki, ci] : A_.phi_inv.t.c) {
            auto pqr = A_.tdecode(ki, 3);
            for (auto& [kp, cp] : A_.phi.t.c) {
                auto stz = A_.tdecode(kp, 3);
                Scalar coeff = ci * cp;
                OTreeElem ax, by, cz;
                for (auto& [ti, s] : bullet_left_tree(pqr[0], x).c)
                    ax.axpy(s, bullet_right_tree(ti, stz[0]));
                for (auto& [ti, s] : bullet_left_tree(pqr[1], y).c)
                    by.axpy(s, bullet_right_tree(ti, stz[1]));
                for (auto& [ti, s] : bullet_left_tree(pqr[2], z).c)
                    cz.axpy(s, bullet_right_tree(ti, stz[2]));
                for (auto& [ta, ca] : ax.c)
                    for (auto& [tb, cb] : by.c)
                        for (auto& [tc, cc] : cz.c)
                            acc.add(join(join(ta, tb), tc), coeff * ca * cb * cc);
            }
        }
        return acc;
    }
    // (x.y).z -> sum (P1.(x.Pinv1)) . ((P2.(y.Pinv2)) . (P3.(z.Pinv3)))
    OTree xy = subtree(t, false), z = subtree(t, true);
    if (xy.shape.size() == 1)
        throw ValidationError("assoc_move: left child is a leaf (pattern mismatch)");
    OTree x = subtree(xy, false), y = subtree(xy, true);
    for (auto& [ki, ci] : A_.phi_inv.t.c) {
        auto pqr = A_.tdecode(ki, 3);
        for (auto& [kp, cp] : A_.phi.t.c) {
            auto stz = A_.tdecode(kp, 3);
            Scalar coeff = ci * cp;
            OTreeElem ax, by, cz;
            for (auto& [ti, s] : bullet_right_tree(x, pqr[0]).c)
                ax.axpy(s, bullet_left_tree(stz[0], ti));
            for (auto& [ti, s] : bullet_right_tree(y, pqr[1]).c)
                by.axpy(s, bullet_left_tree(stz[1], ti));
            for (auto& [ti, s] : bullet_right_tree(z, pqr[2]).c)
                cz.axpy(s, bullet_left_tree(stz[2], ti));
            for (auto& [ta, ca] : ax.c)
                for (auto& [tb, cb] : by.c)
                    for (auto& [tc, cc] : cz.c)
                        acc.add(join(ta, join(tb, tc)), coeff * ca * cb * cc);
        }
    }
    return acc;
}

OTreeElem OdotCalc::assoc_move(const OTreeElem& x, const std::vector<int>& path, int dir) const {
    OTreeElem r;
    for (auto& [t, s] : x.c)
        r.axpy(s, move_at(t, path, dir));
    return r;
}

OElem OdotCalc::normalize_tree(const OTreeElem& x) const {
    std::function<OElem(const OTree&)> rec = [&](const OTree& t) -> OElem {
        if (t.shape.size() == 1) {
            OElem e;
            e.add(OWord{{t.leaves[0]}}, Scalar(1));
            return e;
        }
        return mul(rec(subtree(t, false)), rec(subtree(t, true)));
    };
    OElem r;
    for (auto& [t, s] : x.c)
        r.axpy(s, rec(t));
    return r;
}

OElem OdotCalc::normalize_tree_topdown(const OTreeElem& x) const {
    std::function<OElem(const OTree&)> rec = [&](const OTree& t) -> OElem {
        if (t.shape.size() == 1) {
            OElem e;
            e.add(OWord{{t.leaves[0]}}, Scalar(1));
            return e;
        }
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = topdown_memo_.find(t);
            if (it != topdown_memo_.end())
                return it->second;
        }
        OElem r;
        OTree R = subtree(t, true);
        if (R.shape.size() == 1) {
            OElem left = rec(subtree(t, false));
            for (auto& [w, s] : left.c) {
                OWord nw = w;
                nw.L.push_back(R.leaves[0]);
                r.add(nw, s);
            }
        } else {
            OTreeElem moved = move_at(t, {}, +1);
            for (auto& [ti, s] : moved.c)
                r.axpy(s, rec(ti));
        }
        std::lock_guard<std::mutex> lk(mu_);
        return topdown_memo_.emplace(t, std::move(r)).first->second;
    };
    OElem r;
    for (auto& [t, s] : x.c)
        r.axpy(s, rec(t));
    return r;
}

}  // namespace odot
