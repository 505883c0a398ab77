#include "odot/trees.hpp"

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

}  // namespace

int Tree::leaf_count() const {
    int n = 0;
    for (int k : code)
        if (k == 0)
            ++n;
    return n;
}

int Tree::vertex_count() const {
    int n = 0;
    for (int k : code)
        if (k != 0)
            ++n;
    return n;
}

int Tree::degree() const {
    int d = 0;
    for (int k : code)
        if (k != 0)
            d += k - 2;
    return d;
}

bool Tree::is_binary() const {
    for (int k : code)
        if (k != 0 && k != 2)
            return false;
    return true;
}

bool Tree::is_corolla() const { return !code.empty() && code[0] != 0 && vertex_count() == 1; }

std::string Tree::str() const {
    std::string s;
    size_t pos = 0;
    std::function<void()> rec = [&]() {
        int k = code[pos++];
        if (k == 0) {
            s += '*';
            return;
        }
        s += '(';
        for (int c = 0; c < k; ++c)
            rec();
        s += ')';
    };
    rec();
    return s;
}

Tree leaf_tree() { return Tree{{0}}; }

Tree corolla(int arity) {
    if (arity < 2)
        throw ValidationError("corolla arity must be >= 2");
    Tree t;
    t.code.push_back(arity);
    t.code.insert(t.code.end(), (size_t)arity, 0);
    return t;
}

Tree graft(const Tree& u, const Tree& v, int t) {
    if (t < 1 || t > v.leaf_count())
        throw ValidationError("graft: leaf index out of range");
    Tree r = v;
    int seen = 0;
    for (size_t pos = 0; pos < r.code.size(); ++pos) {
        if (r.code[pos] == 0 && ++seen == t) {
            r.code.erase(r.code.begin() + (long)pos);
            r.code.insert(r.code.begin() + (long)pos, u.code.begin(), u.code.end());
            return r;
        }
    }
    throw ValidationError("graft: internal error");
}

int degree_before_leaf(const Tree& v, int t) {
    int seen = 0, deg = 0;
    for (int k : v.code) {
        if (k == 0) {
            if (++seen == t)
                return deg;
        } else {
            deg += k - 2;
        }
    }
    throw ValidationError("degree_before_leaf: leaf index out of range");
}

std::vector<Tree> enumerate_bracketings(int n) {
    if (n < 1)
        throw ValidationError("enumerate_bracketings: n must be >= 1");
    if (n == 1)
        return {leaf_tree()};
    std::vector<Tree> out;
    for (int l = n - 1; l >= 1; --l) {  // left-heavy first
        for (const Tree& u : enumerate_bracketings(l))
            for (const Tree& v : enumerate_bracketings(n - l)) {
                Tree t;
                t.code.push_back(2);
                t.code.insert(t.code.end(), u.code.begin(), u.code.end());
                t.code.insert(t.code.end(), v.code.begin(), v.code.end());
                out.push_back(std::move(t));
            }
    }
    return out;
}

std::vector<Tree> all_cells(int n) {
    if (n < 2)
        throw ValidationError("all_cells: n must be >= 2");
    // children of arity p: a leaf for p = 1, otherwise any cell tree of K_p
    std::function<std::vector<Tree>(int)> child = [&](int p) -> std::vector<Tree> {
        if (p == 1)
            return {leaf_tree()};
        return all_cells(p);
    };
    std::vector<Tree> out;
    for (int k = 2; k <= n; ++k) {
        // compositions of n into k positive parts
        std::vector<int> parts((size_t)k, 1);
        std::function<void(int, int)> comp = [&](int slot, int remaining) {
            if (slot == k - 1) {
                parts[(size_t)slot] = remaining;
                std::vector<std::vector<Tree>> opts;
                for (int p : parts)
                    opts.push_back(child(p));
                std::vector<size_t> pick((size_t)k, 0);
                while (true) {
                    Tree t;
                    t.code.push_back(k);
                    for (int c = 0; c < k; ++c) {
                        auto& sub = opts[(size_t)c][pick[(size_t)c]];
                        t.code.insert(t.code.end(), sub.code.begin(), sub.code.end());
                    }
                    out.push_back(std::move(t));
                    int c = k - 1;
                    while (c >= 0 && ++pick[(size_t)c] == opts[(size_t)c].size()) {
                        pick[(size_t)c] = 0;
                        --c;
                    }
                    if (c < 0)
                        break;
                }
                return;
            }
            for (int p = 1; p <= remaining - (k - 1 - slot); ++p) {
                parts[(size_t)slot] = p;
                comp(slot + 1, remaining - p);
            }
        };
        comp(0, n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Tree> enumerate_cells(int n, int i) {
    if (n < 2 || i < 0 || i > n - 2)
        throw ValidationError("enumerate_cells: need n >= 2 and 0 <= i <= n-2");
    std::vector<Tree> out;
    for (auto& t : all_cells(n))
        if (t.degree() == i)
            out.push_back(t);
    return out;
}

void TreeChain::add(const Tree& t, const Scalar& s) {
    if (s.is_zero())
        return;
    auto [it, fresh] = c.emplace(t, s);
    if (!fresh) {
        it->second += s;
        if (it->second.is_zero())
            c.erase(it);
    }
}

TreeChain TreeChain::scaled(const Scalar& s) const {
    TreeChain r(arity, degree);
    if (!s.is_zero())
        for (auto& [t, x] : c)
            r.c.emplace(t, x * s);
    return r;
}

TreeChain TreeChain::operator+(const TreeChain& o) const {
    if (arity != o.arity || (!is_zero() && !o.is_zero() && degree != o.degree))
        throw ValidationError("TreeChain addition: grading mismatch");
    TreeChain r = *this;
    if (r.is_zero())
        r.degree = o.degree;
    for (auto& [t, x] : o.c)
        r.add(t, x);
    return r;
}

TreeChain TreeChain::operator-(const TreeChain& o) const { return *this + o.scaled(Scalar(-1)); }

bool TreeChain::operator==(const TreeChain& o) const { return arity == o.arity && c == o.c; }

TreeChain e_gen(int n) {
    TreeChain ch(n + 2, n);
    ch.add(corolla(n + 2), Scalar(1));
    return ch;
}

TreeChain graft_oi(const TreeChain& s, const TreeChain& t, int i) {
    if (i < 1 || i > t.arity)
        throw ValidationError("graft_oi: slot out of range");
    TreeChain r(s.arity + t.arity - 1, s.degree + t.degree);
    for (auto& [tt, ct] : t.c) {
        for (auto& [ts, cs] : s.c) {
            int w = s.degree * degree_before_leaf(tt, i);
            Scalar sign((w % 2) ? -1 : 1);
            r.add(graft(ts, tt, i), sign * cs * ct);
        }
    }
    return r;
}

TreeChain diamond(const TreeChain& phi, const TreeChain& psi) {
    if (phi.arity < 2 || psi.arity < 2)
        throw ValidationError("diamond: arities must be >= 2");
    int a = phi.arity, q = psi.degree;
    TreeChain acc(phi.arity + psi.arity - 1, phi.degree + psi.degree);
    for (int i = 1; i <= psi.arity; ++i) {
        int e = (a + 1) * (i + q + 1);
        acc = acc + graft_oi(phi, psi, i).scaled(Scalar((e % 2) ? -1 : 1));
    }
    return acc;
}

TreeChain lie_bracket(const TreeChain& phi, const TreeChain& psi) {
    int a = phi.arity, p = phi.degree, b = psi.arity, q = psi.degree;
    int e = (a + p + 1) * (b + q + 1);
    return diamond(phi, psi) - diamond(psi, phi).scaled(Scalar((e % 2) ? -1 : 1));
}

TreeChain d_C_gen(int m) {
    TreeChain acc(m + 2, m - 1);
    for (int i = 0; i <= m - 1; ++i) {
        int j = m - 1 - i;
        acc = acc - diamond(e_gen(i), e_gen(j));
    }
    return acc;
}

namespace {
std::map<Tree, TreeChain> g_dc_memo;
}

TreeChain d_C(const TreeChain& ch) {
    TreeChain acc(ch.arity, ch.degree - 1);
    for (auto& [T, coeff] : ch.c) {
        auto it = g_dc_memo.find(T);
        if (it == g_dc_memo.end()) {
            TreeChain dT(T.leaf_count(), T.degree() - 1);
            if (T.is_leaf()) {
                // nothing
            } else if (T.is_corolla()) {
                dT = d_C_gen(T.leaf_count() - 2);
            } else {
                // peel the first non-leaf child: T = sigma (S o_t R), Leibniz
                int k = T.code[0];
                size_t pos = 1;
                int leaves_before = 0;
                for (int c2 = 0; c2 < k; ++c2) {
                    size_t end = subtree_end(T.code, pos);
                    if (T.code[pos] != 0) {
                        Tree S{std::vector<int>(T.code.begin() + (long)pos,
                                                T.code.begin() + (long)end)};
                        Tree R = T;
                        R.code.erase(R.code.begin() + (long)pos, R.code.begin() + (long)end);
                        R.code.insert(R.code.begin() + (long)pos, 0);
                        int t = leaves_before + 1;
                        TreeChain sC(S.leaf_count(), S.degree()), rC(R.leaf_count(), R.degree());
                        sC.add(S, Scalar(1));
                        rC.add(R, Scalar(1));
                        Scalar sigma = graft_oi(sC, rC, t).c.at(T);
                        TreeChain term = graft_oi(d_C(sC), rC, t) +
                                         graft_oi(sC, d_C(rC), t)
                                             .scaled(Scalar((S.degree() % 2) ? -1 : 1));
                        dT = term.scaled(sigma);
                        break;
                    }
                    ++leaves_before;
                    pos = end;
                }
            }
            it = g_dc_memo.emplace(T, std::move(dT)).first;
        }
        acc = acc + it->second.scaled(coeff);
    }
    return acc;
}

TreeChain gamma(const TreeChain& phi, const std::vector<TreeChain>& nus) {
    if ((int)nus.size() != phi.arity)
        throw ValidationError("gamma: arity mismatch");
    TreeChain acc = phi;
    for (int t = (int)nus.size(); t >= 1; --t)
        acc = graft_oi(nus[(size_t)t - 1], acc, t);
    return acc;
}

CompAxiomReport check_comp_axioms(const TreeChain& phi, const TreeChain& psi, const TreeChain& nu,
                                  int i, int j) {
    int a = phi.arity, p = phi.degree, b = psi.arity, q = psi.degree, c = nu.arity;
    if (j < 1 || j > c || i < 1 || i > b + c - 1)
        throw ValidationError("check_comp_axioms: indices out of range");
    TreeChain lhs = graft_oi(phi, graft_oi(psi, nu, j), i);
    CompAxiomReport rep;
    TreeChain rhs(lhs.arity, lhs.degree);
    if (i <= j - 1) {
        rep.case_id = 1;
        rhs = graft_oi(psi, graft_oi(phi, nu, i), j + a - 1)
                  .scaled(Scalar(((p * q) % 2) ? -1 : 1));
    } else if (i <= b + j - 1) {
        rep.case_id = 2;
        rhs = graft_oi(graft_oi(phi, psi, i - j + 1), nu, j);
    } else {
        rep.case_id = 3;
        rhs = graft_oi(psi, graft_oi(phi, nu, i - b + 1), j)
                  .scaled(Scalar(((p * q) % 2) ? -1 : 1));
    }
    if (!(lhs == rhs)) {
        rep.pass = false;
        rep.detail = "comp axiom case " + std::to_string(rep.case_id) + " fails at (i,j)=(" +
                     std::to_string(i) + "," + std::to_string(j) + ")";
    }
    return rep;
}

}  // namespace odot
