#include "odot/cochain.hpp"

#include "odot/parallel.hpp"

namespace odot {

OElem CochainCalc::value_on_letter(const Cochain& f, const OGen& g) const {
    if (g.kind != 1)
        throw ValidationError("cochain value: not a BG letter");
    int i = g.bar_degree();
    if (i == 1) {
        return oc_.bullet_left(SparseVec::unitvec(g.bw[1]), f.at_b1);
    }
    if (i < -f.n - 1)
        return OElem();  // dead by degree homogeneity
    auto itn = f.at_b.find(i);
    if (itn == f.at_b.end())
        return OElem();
    std::vector<int> mids(g.bw.begin() + 2, g.bw.end() - 1);
    auto itw = itn->second.find(mids);
    if (itw == itn->second.end())
        return OElem();
    OElem v = oc_.bullet_left(SparseVec::unitvec(g.bw[1]), itw->second);
    return oc_.bullet_right(v, SparseVec::unitvec(g.bw.back()));
}

OElem CochainCalc::extend(const Cochain& f, const OElem& x) const {
    OElem r;
    for (auto& [w, s] : x.c) {
        if (w.bg_count() != 1)
            throw ValidationError("cochain extension: word is not in the one-BG component");
        size_t slot = (size_t)w.bg_slot();
        OElem val = value_on_letter(f, w.L[slot]);
        if (val.is_zero())
            continue;
        int e = f.n * (int)slot;  // XV prefix of degree |u| = slot
        Scalar sign((e % 2) ? -1 : 1);
        r.axpy(sign * s, oc_.insert_at(w, slot, val));
    }
    return r;
}

Cochain CochainCalc::differential(const Cochain& f, const Integration& I) const {
    const BarModule& bar = oc_.bar();
    if (I.order < f.n + 2)
        throw TruncationError("differential: integration order too small (need K >= " +
                                  std::to_string(f.n + 2) + ")",
                              f.n + 2);
    if (bar.depth() < f.n + 2)
        throw TruncationError("differential: bar depth too small (need T >= " +
                                  std::to_string(f.n + 2) + ")",
                              f.n + 2);
    Cochain df;
    df.n = f.n + 1;
    // the d_C-term sign (-1)^{n+1} is forced by requiring d(f) to be again a
    // cochain (the prefix/suffix Leibniz terms of f.D and d_C.f must cancel)
    // together with the (-1)^{n|u|} extension rule
    Scalar sgn((f.n % 2) ? 1 : -1);
    const Derivation& dm1 = dc_.Dm1_cached();

    auto value_at = [&](const OElem& gen, int domain_deg) {
        // f(D(gen)): only D_j with j <= domain_deg + n + 1 can land in f's
        // live window
        OElem dval = dc_.evaluate(dm1, gen);
        int jmax = std::min(I.order, domain_deg + f.n + 1);
        for (int j = 0; j <= jmax; ++j)
            dval.axpy(Scalar(1), dc_.evaluate(I.D(j), gen));
        OElem out = extend(f, dval);
        // + (-1)^n d_C(f(gen))
        OElem fg = extend_gen(f, gen);
        out.axpy(sgn, oc_.d_C_V(fg));
        return out;
    };

    {
        OElem gen;
        for (auto& [u, cu] : oc_.algebra().unit.c)
            gen.add(OWord{{OGen::bg({1, u})}}, cu);
        df.at_b1 = value_at(gen, 1);
    }
    for (int i = 0; i >= live_floor(df.n) && i >= -bar.depth(); --i) {
        auto& level = df.at_b[i];
        for (auto& mids : bar.free_generators(i)) {
            OElem gen;
            for (auto& [bw, c] : bar.generator_element(i, mids).c)
                gen.add(OWord{{OGen::bg(bw)}}, c);
            level[mids] = value_at(gen, i);
        }
    }
    return df;
}

// f evaluated on a single-BG-letter element (bare generators)
OElem CochainCalc::extend_gen(const Cochain& f, const OElem& gen) const {
    OElem r;
    for (auto& [w, s] : gen.c) {
        if (w.len() != 1 || w.L[0].kind != 1)
            throw ValidationError("extend_gen: expected bare BG letters");
        r.axpy(s, value_on_letter(f, w.L[0]));
    }
    return r;
}

std::vector<Cochain> CochainCalc::basis(int n) const {
    const BarModule& bar = oc_.bar();
    std::vector<Cochain> out;
    for (auto& inv : oc_.invariant_basis(oc_.words_xv(n + 2))) {
        Cochain f;
        f.n = n;
        f.at_b1 = inv;
        out.push_back(std::move(f));
    }
    for (int i = 0; i >= -n - 1 && i >= -bar.depth(); --i) {
        int len = i + 1 + n;
        auto targets = oc_.words_xv(len);
        for (auto& mids : bar.free_generators(i))
            for (auto& w : targets) {
                Cochain f;
                f.n = n;
                OElem v;
                v.add(w, Scalar(1));
                f.at_b[i][mids] = std::move(v);
                out.push_back(std::move(f));
            }
    }
    return out;
}

SparseVec CochainCalc::coords(const Cochain& f, int n) const {
    const BarModule& bar = oc_.bar();
    if (f.n != n)
        throw ValidationError("coords: degree mismatch");
    SparseVec x;
    int offset = 0;
    // B_1 block: solve against the invariant basis
    {
        auto inv = oc_.invariant_basis(oc_.words_xv(n + 2));
        std::map<OWord, int> widx;
        for (auto& w : oc_.words_xv(n + 2)) {
            int id = (int)widx.size();
            widx[w] = id;
        }
        SparseMat M((int)widx.size(), (int)inv.size());
        for (int j = 0; j < (int)inv.size(); ++j)
            for (auto& [w, s] : inv[(size_t)j].c)
                M.set(widx.at(w), j, s);
        SparseVec b;
        for (auto& [w, s] : f.at_b1.c)
            b.add(widx.at(w), s);
        auto sol = solve(M, b);
        if (!sol)
            throw ValidationError("coords: B_1 value is not invariant");
        for (auto& [j, s] : sol->c)
            x.add(offset + j, s);
        offset += (int)inv.size();
    }
    for (int i = 0; i >= -n - 1 && i >= -bar.depth(); --i) {
        int len = i + 1 + n;
        auto targets = oc_.words_xv(len);
        std::map<OWord, int> widx;
        for (auto& w : targets) {
            int id = (int)widx.size();
            widx[w] = id;
        }
        auto gens = bar.free_generators(i);
        for (int gi = 0; gi < (int)gens.size(); ++gi) {
            auto itn = f.at_b.find(i);
            if (itn != f.at_b.end()) {
                auto itw = itn->second.find(gens[(size_t)gi]);
                if (itw != itn->second.end())
                    for (auto& [w, s] : itw->second.c)
                        x.add(offset + gi * (int)targets.size() + widx.at(w), s);
            }
        }
        offset += (int)gens.size() * (int)targets.size();
    }
    return x;
}

CohomologyReport CochainCalc::cohomology(const Integration& I, int n) const {
    if (n < 1)
        throw ValidationError("cohomology: degree must be >= 1");
    auto bn = basis(n);
    auto bprev = basis(n - 1);
    int dim_n = (int)bn.size();

    // d_n matrix; columns are independent, merged in index order
    std::vector<SparseVec> dn_cols = parallel_indexed<SparseVec>(
        bn.size(), [&](size_t j) { return coords(differential(bn[j], I), n + 1); });
    int rows_np1 = (int)basis(n + 1).size();
    SparseMat Dn = mat_from_columns(dn_cols, rows_np1);

    std::vector<SparseVec> zbasis = kernel_basis(Dn);
    std::vector<SparseVec> img = parallel_indexed<SparseVec>(
        bprev.size(), [&](size_t j) { return coords(differential(bprev[j], I), n); });
    std::vector<SparseVec> bvecs;
    for (auto& v : img)
        if (!v.is_zero())
            bvecs.push_back(v);
    CohomologyReport rep;
    rep.n = n;
    rep.dim_c = dim_n;
    rep.dim_z = (int)zbasis.size();
    rep.dim_b = rank_of_span(bvecs, dim_n);
    rep.dim_h = quotient_dim(zbasis, bvecs, dim_n);
    rep.order = I.order;
    rep.bar_depth = I.bar_depth;
    return rep;
}

Cochain CochainCalc::psi(const GaugeElt& g, const Cochain& f) const {
    const BarModule& bar = oc_.bar();
    Cochain r;
    r.n = f.n;
    int cap = f.n + 3;
    {
        OElem gen;
        for (auto& [u, cu] : oc_.algebra().unit.c)
            gen.add(OWord{{OGen::bg({1, u})}}, cu);
        r.at_b1 = extend(f, in_.gauge_apply(g, gen, cap, -f.n - 1));
    }
    for (int i = 0; i >= -f.n - 1 && i >= -bar.depth(); --i) {
        auto& level = r.at_b[i];
        for (auto& mids : bar.free_generators(i)) {
            OElem gen;
            for (auto& [bw, c] : bar.generator_element(i, mids).c)
                gen.add(OWord{{OGen::bg(bw)}}, c);
            level[mids] = extend(f, in_.gauge_apply(g, gen, cap, -f.n - 1));
        }
    }
    return r;
}

}  // namespace odot
