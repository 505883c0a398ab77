#include "odot/io.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "odot/parallel.hpp"

namespace odot {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[(size_t)i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

std::string serialize_derivation(const Drinfeld& A, const Derivation& d) {
    std::string s = "deg=" + std::to_string(d.deg) + ";xv=" + std::to_string(d.xv_shift) +
                    ";bg=" + std::to_string(d.bg_shift) + ";cert=" + std::to_string(d.cert_min) +
                    ";V:" + d.on_v.str(A) + ";B1:" + d.on_b1.str(A);
    for (auto& [n, level] : d.on_b) {
        if (n < d.cert_min)
            continue;
        for (auto& [mids, val] : level) {
            s += ";B" + std::to_string(n) + "[";
            for (int m : mids)
                s += std::to_string(m) + ",";
            s += "]:" + val.str(A);
        }
    }
    return s;
}

}  // namespace

std::string digest_derivation(const Drinfeld& A, const Derivation& d) {
    return hex64(fnv1a(serialize_derivation(A, d)));
}

Drinfeld parse_input(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open input file '" + path + "'");
    Drinfeld A;
    bool have_dim = false;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto need_dim = [&]() {
        if (!have_dim)
            fail("'dim' must come first");
    };
    auto idx = [&](const std::string& tok) {
        int i;
        try {
            i = std::stoi(tok);
        } catch (...) {
            fail("bad index '" + tok + "'");
            return 0;
        }
        if (i < 0 || i >= A.dim)
            fail("index " + tok + " out of range");
        return i;
    };
    auto rat = [&](const std::string& tok) {
        try {
            return Scalar::parse(tok);
        } catch (const ParseError& e) {
            fail(e.what());
            return Scalar();
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key))
            continue;
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t)
            toks.push_back(t);
        if (key == "dim") {
            if (toks.size() != 1)
                fail("dim takes one value");
            A.dim = std::stoi(toks[0]);
            if (A.dim <= 0)
                fail("dim must be positive");
            have_dim = true;
            A.names.resize((size_t)A.dim);
            for (int i = 0; i < A.dim; ++i)
                A.names[(size_t)i] = "e" + std::to_string(i);
            A.mult.assign((size_t)A.dim, std::vector<SparseVec>((size_t)A.dim));
            A.comul.resize((size_t)A.dim);
            for (auto& c : A.comul)
                c.arity = 2;
            A.counit.assign((size_t)A.dim, Scalar());
            A.phi.arity = 3;
        } else if (key == "name") {
            need_dim();
            if (toks.size() != 2)
                fail("name takes: index label");
            A.names[(size_t)idx(toks[0])] = toks[1];
        } else if (key == "unit") {
            need_dim();
            if (toks.size() != 2)
                fail("unit takes: index coefficient");
            A.unit.add(idx(toks[0]), rat(toks[1]));
        } else if (key == "mult") {
            need_dim();
            if (toks.size() != 4)
                fail("mult takes: i j k coefficient");
            A.mult[(size_t)idx(toks[0])][(size_t)idx(toks[1])].add(idx(toks[2]), rat(toks[3]));
        } else if (key == "comul") {
            need_dim();
            if (toks.size() != 4)
                fail("comul takes: i j k coefficient");
            int i = idx(toks[0]), j = idx(toks[1]), k = idx(toks[2]);
            A.comul[(size_t)i].t.add((int)A.tencode({j, k}), rat(toks[3]));
        } else if (key == "counit") {
            need_dim();
            if (toks.size() != 2)
                fail("counit takes: index value");
            A.counit[(size_t)idx(toks[0])] = rat(toks[1]);
        } else if (key == "phi") {
            need_dim();
            if (toks.size() != 4)
                fail("phi takes: i j k coefficient");
            int i = idx(toks[0]), j = idx(toks[1]), k = idx(toks[2]);
            A.phi.t.add((int)A.tencode({i, j, k}), rat(toks[3]));
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_dim)
        throw ParseError(path + ": missing 'dim'");
    try {
        A.finalize();  // checks eps(1) = 1, inverts Phi
    } catch (const ValidationError& e) {
        throw ParseError(path + ": " + e.what());
    }
    return A;
}

namespace {

struct Session {
    Drinfeld A;
    BarModule bar;
    OdotCalc oc;
    DerCalc dc;
    Integrator in;
    CochainCalc cc;
    Session(Drinfeld a, int T, Homotopy h)
        : A(std::move(a)), bar(A, T), oc(A, bar), dc(oc), in(dc, h), cc(in) {}
};

Homotopy strategy_of(const std::string& s) {
    if (s == "left")
        return Homotopy::Left;
    if (s == "right")
        return Homotopy::Right;
    throw ValidationError("unknown homotopy strategy '" + s + "' (use left|right)");
}

using ordered_json = nlohmann::ordered_json;

struct Reporter {
    bool machine;
    std::ostringstream text;
    ordered_json j;

    explicit Reporter(bool machine_) : machine(machine_) {}

    void kv(const std::string& k, const std::string& v) {
        if (machine)
            j[k] = v;
        else
            text << k << ": " << v << "\n";
    }
    void kv(const std::string& k, bool v) {
        if (machine)
            j[k] = v;
        else
            text << k << ": " << (v ? "pass" : "FAIL") << "\n";
    }
    void kv(const std::string& k, int v) {
        if (machine)
            j[k] = v;
        else
            text << k << ": " << v << "\n";
    }
    std::string str() {
        if (machine)
            return j.dump(2) + "\n";
        return text.str();
    }
};

std::string integration_id(const Session& s, const Integration& I) {
    std::string acc = digest_derivation(s.A, I.D0);
    for (int k = 1; k <= I.order; ++k)
        acc += "|" + digest_derivation(s.A, I.D(k));
    return hex64(fnv1a(acc));
}

RunResult cmd_check(Session& s, const SessionConfig& cfg) {
    Reporter rep(cfg.format == "machine");
    rep.kv("command", std::string("check"));
    rep.kv("input", cfg.input);
    auto b = s.A.check_bialgebra();
    auto q = b.pass ? s.A.check_quasi_coassoc() : CheckReport{false, "skipped"};
    auto p = b.pass ? s.A.check_pentagon() : CheckReport{false, "skipped"};
    rep.kv("bialgebra", b.pass);
    if (!b.pass)
        rep.kv("bialgebra_detail", b.detail);
    rep.kv("quasi_coassociativity", q.pass);
    if (!q.pass && !q.detail.empty())
        rep.kv("quasi_coassociativity_detail", q.detail);
    rep.kv("pentagon", p.pass);
    if (!p.pass && !p.detail.empty())
        rep.kv("pentagon_detail", p.detail);
    rep.kv("phi_counital_informational", s.A.phi_counital ? std::string("yes") : std::string("no"));
    bool ok = b.pass && q.pass && p.pass;
    rep.kv("result", ok);
    return {ok ? 0 : 2, rep.str()};
}

RunResult cmd_integrate(Session& s, const SessionConfig& cfg) {
    Reporter rep(cfg.format == "machine");
    rep.kv("command", std::string("integrate"));
    rep.kv("input", cfg.input);
    rep.kv("order", cfg.order);
    rep.kv("bar_depth", cfg.bar_depth);
    Integration I = s.in.integrate(s.dc.make_D0(), cfg.order);
    rep.kv("D0_digest", digest_derivation(s.A, I.D0));
    for (int k = 1; k <= cfg.order; ++k)
        rep.kv("D" + std::to_string(k) + "_digest", digest_derivation(s.A, I.D(k)));
    bool all = true;
    for (int m = 0; m <= cfg.order; ++m) {
        auto mc = s.in.verify_mc(I, m);
        all = all && mc.pass;
        rep.kv("mc_order_" + std::to_string(m), mc.pass);
        rep.kv("mc_order_" + std::to_string(m) + "_window", mc.window_min);
    }
    rep.kv("integration_id", integration_id(s, I));
    rep.kv("result", all);
    return {all ? 0 : 2, rep.str()};
}

RunResult cmd_gauge(const SessionConfig& cfg) {
    Reporter rep(cfg.format == "machine");
    rep.kv("command", std::string("gauge"));
    rep.kv("input", cfg.input);
    Session sl(parse_input(cfg.input), cfg.bar_depth, Homotopy::Left);
    Session sr(parse_input(cfg.input), cfg.bar_depth, Homotopy::Right);
    Integration IL = sl.in.integrate(sl.dc.make_D0(), cfg.order);
    Integration IR = sr.in.integrate(sr.dc.make_D0(), cfg.order);
    rep.kv("integration_left", integration_id(sl, IL));
    rep.kv("integration_right", integration_id(sr, IR));
    GaugeElt g = sl.in.gauge(IL, IR, cfg.order);
    std::string gd;
    for (auto& f : g.factors)
        gd += serialize_derivation(sl.A, f) + "||";
    rep.kv("gauge_digest", hex64(fnv1a(gd)));
    rep.kv("gauge_factors", (int)g.factors.size());
    Integration moved = sl.in.act_gauge(g, IR);
    bool all = true;
    for (int k = 1; k <= cfg.order; ++k) {
        bool eq = sl.dc.equal_within(moved.D(k), IL.D(k),
                                     std::max(moved.D(k).cert_min, IL.D(k).cert_min));
        all = all && eq;
        rep.kv("conjugation_level_" + std::to_string(k), eq);
    }
    Integration round = sl.in.act_gauge(g, sl.in.act_gauge(g.inverse(), IL));
    bool rt = true;
    for (int k = 1; k <= cfg.order; ++k)
        rt = rt && sl.dc.equal_within(round.D(k), IL.D(k),
                                      std::max(round.D(k).cert_min, IL.D(k).cert_min));
    all = all && rt;
    rep.kv("roundtrip", rt);
    rep.kv("result", all);
    return {all ? 0 : 2, rep.str()};
}

RunResult cmd_cohomology(Session& s, const SessionConfig& cfg) {
    Reporter rep(cfg.format == "machine");
    rep.kv("command", std::string("cohomology"));
    rep.kv("input", cfg.input);
    rep.kv("strategy", cfg.strategy);
    int needK = cfg.order;
    for (int n : cfg.degrees)
        needK = std::max(needK, n + 2);
    Integration I = s.in.integrate(s.dc.make_D0(), needK);
    rep.kv("integration_id", integration_id(s, I));
    for (int n : cfg.degrees) {
        auto r = s.cc.cohomology(I, n);
        std::string p = "H" + std::to_string(n) + "_";
        rep.kv(p + "dim_C", r.dim_c);
        rep.kv(p + "dim_Z", r.dim_z);
        rep.kv(p + "dim_B", r.dim_b);
        rep.kv(p + "dim_H", r.dim_h);
    }
    rep.kv("result", true);
    return {0, rep.str()};
}

RunResult cmd_selftest(Session& s, const SessionConfig& cfg) {
    Reporter rep(cfg.format == "machine");
    rep.kv("command", std::string("selftest"));
    rep.kv("input", cfg.input);
    bool all = true;
    auto put = [&](const std::string& name, bool ok) {
        all = all && ok;
        rep.kv(name, ok);
    };

    put("bialgebra", s.A.check_bialgebra().pass);
    put("quasi_coassociativity", s.A.check_quasi_coassoc().pass);
    put("pentagon", s.A.check_pentagon().pass);

    {
        bool ok = true;
        for (int n = -1; n >= -s.bar.depth() && ok; --n)
            for (auto& w : s.bar.basis(n)) {
                BarElem x;
                x.add(w, Scalar(1));
                if (!s.bar.d_bar(s.bar.d_bar(x)).is_zero()) {
                    ok = false;
                    break;
                }
            }
        put("bar_d_squared", ok);
        for (auto strat : {Homotopy::Left, Homotopy::Right}) {
            bool hok = true;
            for (int n = 1; n >= -s.bar.depth() + 1 && hok; --n)
                for (auto& w : s.bar.basis(n)) {
                    BarElem x;
                    x.add(w, Scalar(1));
                    BarElem acc = s.bar.d_bar(s.bar.contract_h(x, strat));
                    if (n <= 0)
                        acc.axpy(Scalar(1), s.bar.contract_h(s.bar.d_bar(x), strat));
                    if (!(acc == x)) {
                        hok = false;
                        break;
                    }
                }
            put(strat == Homotopy::Left ? "bar_homotopy_left" : "bar_homotopy_right", hok);
        }
    }

    {
        std::mt19937_64 rng(2024);
        bool eq3 = true;
        for (int trial = 0; trial < 4 && eq3; ++trial) {
            auto rand_el = [&](int len) {
                OElem e;
                OWord w;
                for (int t = 0; t < len; ++t) {
                    auto basis = s.bar.basis((int)(rng() % 3) - 1);
                    if (rng() % 3 == 0 && !basis.empty())
                        w.L.push_back(OGen::bg(basis[rng() % basis.size()]));
                    else
                        w.L.push_back(OGen::xv((int)(rng() % (size_t)s.A.dim)));
                }
                e.add(w, Scalar(1 + (long)(rng() % 3)));
                return e;
            };
            OElem x = rand_el(1 + (int)(rng() % 2)), y = rand_el(1 + (int)(rng() % 2)),
                  z = rand_el(1);
            OElem lhs, rhs;
            for (auto& [k, cp] : s.A.phi.t.c) {
                auto t3 = s.A.tdecode(k, 3);
                lhs.axpy(cp, s.oc.mul(s.oc.bullet_left(SparseVec::unitvec(t3[0]), x),
                                      s.oc.mul(s.oc.bullet_left(SparseVec::unitvec(t3[1]), y),
                                               s.oc.bullet_left(SparseVec::unitvec(t3[2]), z))));
                rhs.axpy(cp, s.oc.mul(s.oc.mul(s.oc.bullet_right(x, SparseVec::unitvec(t3[0])),
                                               s.oc.bullet_right(y, SparseVec::unitvec(t3[1]))),
                                      s.oc.bullet_right(z, SparseVec::unitvec(t3[2]))));
            }
            eq3 = lhs == rhs;
        }
        put("quasi_associativity", eq3);

        bool coher = true;
        for (int len = 2; len <= 4 && coher; ++len) {
            auto brs = enumerate_bracketings(len);
            for (int trial = 0; trial < 3 && coher; ++trial) {
                OWord w;
                for (int t = 0; t < len; ++t)
                    w.L.push_back(OGen::xv((int)(rng() % (size_t)s.A.dim)));
                if (trial == 1)
                    w.L[0] = OGen::bg({0, (int)(rng() % (size_t)s.A.dim), 0});
                for (auto& br : brs) {
                    OTreeElem e;
                    e.add(s.oc.tree_of_word(w, br), Scalar(1));
                    if (!(s.oc.normalize_tree(e) == s.oc.normalize_tree_topdown(e))) {
                        coher = false;
                        break;
                    }
                }
            }
        }
        put("pentagon_coherence", coher);

        bool dc2 = true;
        for (int len = 1; len <= 3 && dc2; ++len)
            for (auto& w : s.oc.words_xv(len)) {
                OElem e;
                e.add(w, Scalar(1));
                if (!s.oc.d_C_V(s.oc.d_C_V(e)).is_zero()) {
                    dc2 = false;
                    break;
                }
            }
        put("d_C_squared_on_odotV", dc2);
    }

    {
        Derivation d0 = s.dc.make_D0();
        Derivation nb = s.dc.nabla(d0);
        put("nabla_D0", nb.is_zero_within(nb.cert_min));
        Derivation br = s.dc.commutator(d0, d0);
        put("bracket_D0_D0_on_V", br.on_v.is_zero());
        put("bracket_D0_D0_on_B1", br.on_b1.is_zero());
        Integration I = s.in.integrate(d0, cfg.order);
        bool mc = true;
        for (int m = 0; m <= cfg.order; ++m)
            mc = mc && s.in.verify_mc(I, m).pass;
        put("maurer_cartan", mc);
        bool oper = true;
        for (int n = 0; n <= cfg.order; ++n)
            oper = oper && s.in.operad_chain_check(I, n);
        put("operad_correspondence", oper);
    }

    rep.kv("result", all);
    return {all ? 0 : 2, rep.str()};
}

}  // namespace

RunResult run_command(const std::string& command, const SessionConfig& cfg) {
    if (cfg.prime_mode)
        Scalar::set_prime_mode(cfg.prime);
    else
        Scalar::set_rational_mode();
    set_thread_count(cfg.threads);
    if (cfg.prime_mode && cfg.prime <= cfg.order + 2)
        throw ValidationError("prime field too small: need p > K + 2 for gauge factorials");
    if (cfg.bar_depth < cfg.order + 2 &&
        (command == "integrate" || command == "gauge" || command == "cohomology" ||
         command == "selftest"))
        throw TruncationError("session invariant T >= K + 2 violated (need T >= " +
                                  std::to_string(cfg.order + 2) + ")",
                              cfg.order + 2);

    if (command == "gauge")
        return cmd_gauge(cfg);

    Session s(parse_input(cfg.input), cfg.bar_depth, strategy_of(cfg.strategy));
    if (command == "check")
        return cmd_check(s, cfg);
    if (command == "integrate")
        return cmd_integrate(s, cfg);
    if (command == "cohomology")
        return cmd_cohomology(s, cfg);
    if (command == "selftest")
        return cmd_selftest(s, cfg);
    throw ValidationError("unknown command '" + command + "'");
}

}  // namespace odot
