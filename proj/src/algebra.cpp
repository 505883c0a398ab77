#include "odot/algebra.hpp"

namespace odot {

Scalar Drinfeld::eps(const SparseVec& v) const {
    Scalar s;
    for (auto& [i, c] : v.c)
        s += c * counit[(size_t)i];
    return s;
}

SparseVec Drinfeld::mul(const SparseVec& a, const SparseVec& b) const {
    SparseVec r;
    for (auto& [i, ca] : a.c)
        for (auto& [j, cb] : b.c)
            r.axpy(ca * cb, mult[(size_t)i][(size_t)j]);
    return r;
}

SparseVec Drinfeld::pi(const SparseVec& v) const {
    SparseVec r = v;
    r.axpy(-eps(v), unit);
    return r;
}

SparseVec Drinfeld::vbar_coords(const SparseVec& v) const {
    SparseMat M = mat_from_columns(vbar, dim);
    auto x = solve(M, v);
    if (!x)
        throw ValidationError("vbar_coords: element not in Ker(eps)");
    return *x;
}

int Drinfeld::tdim(int arity) const {
    long d = 1;
    for (int i = 0; i < arity; ++i)
        d *= dim;
    return (int)d;
}

long Drinfeld::tencode(const std::vector<int>& idx) const {
    long code = 0;
    for (int i : idx)
        code = code * dim + i;
    return code;
}

std::vector<int> Drinfeld::tdecode(long code, int arity) const {
    std::vector<int> idx((size_t)arity);
    for (int s = arity - 1; s >= 0; --s) {
        idx[(size_t)s] = (int)(code % dim);
        code /= dim;
    }
    return idx;
}

Tensor Drinfeld::tensor_unit(int arity) const {
    // unit may have several coordinates; expand 1 x ... x 1 fully
    Tensor r;
    r.arity = arity;
    std::vector<std::pair<long, Scalar>> acc = {{0, Scalar(1)}};
    for (int s = 0; s < arity; ++s) {
        std::vector<std::pair<long, Scalar>> nxt;
        for (auto& [code, c] : acc)
            for (auto& [i, u] : unit.c)
                nxt.emplace_back(code * dim + i, c * u);
        acc = std::move(nxt);
    }
    for (auto& [code, c] : acc)
        r.t.add((int)code, c);
    return r;
}

Tensor Drinfeld::tmul(const Tensor& a, const Tensor& b) const {
    if (a.arity != b.arity)
        throw ValidationError("tmul: arity mismatch");
    Tensor r;
    r.arity = a.arity;
    for (auto& [ka, ca] : a.t.c) {
        auto ia = tdecode(ka, a.arity);
        for (auto& [kb, cb] : b.t.c) {
            auto ib = tdecode(kb, b.arity);
            // expand slotwise products
            std::vector<std::pair<long, Scalar>> acc = {{0, ca * cb}};
            for (int s = 0; s < a.arity; ++s) {
                const SparseVec& prod = mult[(size_t)ia[(size_t)s]][(size_t)ib[(size_t)s]];
                std::vector<std::pair<long, Scalar>> nxt;
                for (auto& [code, c] : acc)
                    for (auto& [k, cp] : prod.c)
                        nxt.emplace_back(code * dim + k, c * cp);
                acc = std::move(nxt);
            }
            for (auto& [code, c] : acc)
                r.t.add((int)code, c);
        }
    }
    return r;
}

Tensor Drinfeld::apply_delta(const Tensor& a, int slot) const {
    Tensor r;
    r.arity = a.arity + 1;
    for (auto& [k, c] : a.t.c) {
        auto idx = tdecode(k, a.arity);
        for (auto& [jk, cd] : comul[(size_t)idx[(size_t)slot]].t.c) {
            auto pair = tdecode(jk, 2);
            std::vector<int> out;
            out.reserve((size_t)a.arity + 1);
            for (int s = 0; s < a.arity; ++s) {
                if (s == slot) {
                    out.push_back(pair[0]);
                    out.push_back(pair[1]);
                } else {
                    out.push_back(idx[(size_t)s]);
                }
            }
            r.t.add((int)tencode(out), c * cd);
        }
    }
    return r;
}

Tensor Drinfeld::apply_eps(const Tensor& a, int slot) const {
    Tensor r;
    r.arity = a.arity - 1;
    for (auto& [k, c] : a.t.c) {
        auto idx = tdecode(k, a.arity);
        Scalar e = counit[(size_t)idx[(size_t)slot]];
        if (e.is_zero())
            continue;
        std::vector<int> out;
        for (int s = 0; s < a.arity; ++s)
            if (s != slot)
                out.push_back(idx[(size_t)s]);
        r.t.add((int)tencode(out), c * e);
    }
    return r;
}

Tensor Drinfeld::pad(const Tensor& a, int left, int right) const {
    Tensor u = tensor_unit(left + a.arity + right);
    // build 1^l x a x 1^r directly: combine unit expansions with a's keys
    Tensor r;
    r.arity = left + a.arity + right;
    Tensor ul = tensor_unit(left), ur = tensor_unit(right);
    for (auto& [kl, cl] : ul.t.c)
        for (auto& [ka, ca] : a.t.c)
            for (auto& [kr, cr] : ur.t.c) {
                long code = kl;
                for (int s = 0; s < a.arity; ++s)
                    code = code * dim + tdecode(ka, a.arity)[(size_t)s];
                for (int s = 0; s < right; ++s)
                    code = code * dim + tdecode(kr, right)[(size_t)s];
                r.t.add((int)code, cl * ca * cr);
            }
    (void)u;
    return r;
}

CheckReport Drinfeld::check_bialgebra() const {
    auto fail = [](const std::string& s) { return CheckReport{false, s}; };
    auto basis = [&](int i) { return SparseVec::unitvec(i); };
    // unit axioms
    for (int i = 0; i < dim; ++i) {
        if (!(mul(unit, basis(i)) == basis(i)))
            return fail("unit: 1.e_" + std::to_string(i) + " != e_" + std::to_string(i));
        if (!(mul(basis(i), unit) == basis(i)))
            return fail("unit: e_" + std::to_string(i) + ".1 != e_" + std::to_string(i));
    }
    // associativity on basis triples
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                SparseVec lhs = mul(mul(basis(i), basis(j)), basis(k));
                SparseVec rhs = mul(basis(i), mul(basis(j), basis(k)));
                if (!(lhs == rhs))
                    return fail("assoc(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ")");
            }
    // counit identities (eps x id)Delta = (id x eps)Delta = id
    for (int i = 0; i < dim; ++i) {
        Tensor d = comul[(size_t)i];
        Tensor l = apply_eps(d, 0), r = apply_eps(d, 1);
        if (!(l.t == basis(i)))
            return fail("counit-left(e_" + std::to_string(i) + ")");
        if (!(r.t == basis(i)))
            return fail("counit-right(e_" + std::to_string(i) + ")");
    }
    // eps is an algebra map
    {
        if (!(eps(unit) == Scalar(1)))
            return fail("eps(1) != 1");
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (!(eps(mul(basis(i), basis(j))) == counit[(size_t)i] * counit[(size_t)j]))
                    return fail("eps-hom(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    // Delta is an algebra map
    {
        Tensor du;
        du.arity = 2;
        for (auto& [i, c] : unit.c)
            for (auto& [jk, cd] : comul[(size_t)i].t.c)
                du.t.add((int)jk, c * cd);
        if (!(du == tensor_unit(2)))
            return fail("Delta(1) != 1x1");
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                Tensor lhs;
                lhs.arity = 2;
                for (auto& [k, c] : mul(basis(i), basis(j)).c)
                    for (auto& [jk, cd] : comul[(size_t)k].t.c)
                        lhs.t.add((int)jk, c * cd);
                Tensor rhs = tmul(comul[(size_t)i], comul[(size_t)j]);
                if (!(lhs == rhs))
                    return fail("Delta-hom(" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }
    return {};
}

CheckReport Drinfeld::check_quasi_coassoc() const {
    for (int i = 0; i < dim; ++i) {
        Tensor d = comul[(size_t)i];
        Tensor lhs = tmul(apply_delta(d, 1), phi);   // (1 x Delta)Delta(a) . Phi
        Tensor rhs = tmul(phi, apply_delta(d, 0));   // Phi . (Delta x 1)Delta(a)
        if (!(lhs == rhs))
            return {false, "quasi-coassociativity fails on basis a = e_" + std::to_string(i)};
    }
    return {};
}

CheckReport Drinfeld::check_pentagon() const {
    Tensor lhs = tmul(apply_delta(phi, 2), apply_delta(phi, 0));
    Tensor rhs = tmul(tmul(pad(phi, 1, 0), apply_delta(phi, 1)), pad(phi, 0, 1));
    if (!(lhs == rhs))
        return {false, "pentagon identity fails"};
    return {};
}

Tensor Drinfeld::invert_phi(const Tensor& p) const {
    int n = tdim(3);
    SparseMat L(n, n);
    for (int j = 0; j < n; ++j) {
        Tensor ej;
        ej.arity = 3;
        ej.t.add(j, Scalar(1));
        Tensor col = tmul(p, ej);
        for (auto& [r, s] : col.t.c)
            L.set(r, j, s);
    }
    Tensor one = tensor_unit(3);
    auto x = solve(L, one.t);
    if (!x)
        throw ValidationError("Phi is not invertible: left-multiplication matrix has rank " +
                              std::to_string(rank_of(L)) + " < " + std::to_string(n));
    Tensor inv;
    inv.arity = 3;
    inv.t = *x;
    if (!(tmul(p, inv) == one) || !(tmul(inv, p) == one))
        throw ValidationError("Phi inverse verification failed");
    return inv;
}

void Drinfeld::finalize() {
    if (dim <= 0)
        throw ValidationError("algebra dimension must be positive");
    if (!(eps(unit) == Scalar(1)))
        throw ValidationError("eps(1) != 1");
    // vbar = echelonized kernel of the counit row
    SparseMat E(1, dim);
    for (int i = 0; i < dim; ++i)
        E.set(0, i, counit[(size_t)i]);
    vbar = kernel_basis(E);
    phi_inv = invert_phi(phi);
    Tensor mid = apply_eps(phi, 1);
    phi_counital = (mid == tensor_unit(2));
}

bool Drinfeld::phi_is_trivial() const { return phi == tensor_unit(3); }

Drinfeld make_dim1() {
    Drinfeld A;
    A.dim = 1;
    A.names = {"1"};
    A.unit = SparseVec::unitvec(0);
    A.mult = {{SparseVec::unitvec(0)}};
    Tensor d;
    d.arity = 2;
    d.t.add(0, Scalar(1));
    A.comul = {d};
    A.counit = {Scalar(1)};
    A.phi.arity = 3;
    A.phi.t.add(0, Scalar(1));
    A.finalize();
    return A;
}

Drinfeld make_e2(int which_phi) {
    Drinfeld A;
    A.dim = 2;
    A.names = {"1", "g"};
    A.unit = SparseVec::unitvec(0);
    A.mult.assign(2, std::vector<SparseVec>(2));
    A.mult[0][0] = SparseVec::unitvec(0);
    A.mult[0][1] = SparseVec::unitvec(1);
    A.mult[1][0] = SparseVec::unitvec(1);
    A.mult[1][1] = SparseVec::unitvec(0);  // g^2 = 1
    A.comul.resize(2);
    A.comul[0].arity = 2;
    A.comul[0].t.add((int)A.tencode({0, 0}), Scalar(1));
    A.comul[1].arity = 2;
    A.comul[1].t.add((int)A.tencode({1, 1}), Scalar(1));  // Delta(g) = g x g
    A.counit = {Scalar(1), Scalar(1)};
    A.phi.arity = 3;
    A.phi.t.add((int)A.tencode({0, 0, 0}), Scalar(1));
    if (which_phi != 0) {
        // p x p x p with p = (1-g)/2: coefficient (-1)^{#g}/8 at each triple
        Scalar lam = which_phi == 1 ? Scalar(-2) : Scalar(1);  // Phi1 = 1 - 2 ppp; bad = 1 + ppp
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    int ones = i + j + k;
                    Scalar c = Scalar((ones % 2) ? -1 : 1, 8);
                    A.phi.t.add((int)A.tencode({i, j, k}), lam * c);
                }
    }
    A.finalize();
    return A;
}

Drinfeld make_z3() {
    Drinfeld A;
    A.dim = 3;
    A.names = {"1", "g", "g2"};
    A.unit = SparseVec::unitvec(0);
    A.mult.assign(3, std::vector<SparseVec>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            A.mult[(size_t)i][(size_t)j] = SparseVec::unitvec((i + j) % 3);
    A.comul.resize(3);
    for (int i = 0; i < 3; ++i) {
        A.comul[(size_t)i].arity = 2;
        A.comul[(size_t)i].t.add((int)A.tencode({i, i}), Scalar(1));
    }
    A.counit = {Scalar(1), Scalar(1), Scalar(1)};
    A.phi.arity = 3;
    A.phi.t.add((int)A.tencode({0, 0, 0}), Scalar(1));
    A.finalize();
    return A;
}

}  // namespace odot
