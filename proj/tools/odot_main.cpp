#include <CLI11.hpp>

#include <iostream>

#include "odot/io.hpp"

using namespace odot;

int main(int argc, char** argv) {
    CLI::App app{"odot: exact homotopy-comodule integration and cohomology for "
                 "finite-dimensional Drinfel'd algebras"};
    app.require_subcommand(1);

    SessionConfig cfg;
    std::vector<std::string> scalar = {"rational"};

    auto add_common = [&](CLI::App* sub, bool needs_input = true) {
        if (needs_input)
            sub->add_option("input", cfg.input, "structure-constant file")->required();
        sub->add_option("--scalar", scalar,
                        "scalar mode: 'rational' or 'fp <p>' (prime field)")
            ->expected(1, 2);
        sub->add_option("--bar-depth", cfg.bar_depth, "bar truncation depth T");
        sub->add_option("--order", cfg.order, "deformation order K");
        sub->add_option("--strategy", cfg.strategy, "contracting homotopy: left|right");
        sub->add_option("--format", cfg.format, "output format: human|machine");
        sub->add_option("--threads", cfg.threads, "worker threads (output is identical)");
        return sub;
    };

    auto* c_check = add_common(app.add_subcommand("check", "run the Drinfel'd algebra axiom checks"));
    auto* c_int = add_common(app.add_subcommand("integrate", "integrate D0 to a homotopy comodule structure"));
    auto* c_gauge = add_common(app.add_subcommand(
        "gauge", "build two integrations (left/right homotopies) and the gauge between them"));
    auto* c_coh = add_common(app.add_subcommand("cohomology", "compute H^n(A) dimensions"));
    c_coh->add_option("--n", cfg.degrees, "cohomology degrees")->expected(-1);
    auto* c_self = add_common(app.add_subcommand("selftest", "run the property suite on the input"));

    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (auto* sub : {c_check, c_int, c_gauge, c_coh, c_self})
        if (sub->parsed())
            command = sub->get_name();

    if (scalar.size() >= 1 && scalar[0] == "fp") {
        if (scalar.size() != 2) {
            std::cerr << "error: --scalar fp needs a prime\n";
            return 5;
        }
        cfg.prime_mode = true;
        cfg.prime = std::stol(scalar[1]);
    } else if (scalar.size() >= 1 && scalar[0] != "rational") {
        std::cerr << "error: unknown scalar mode '" << scalar[0] << "'\n";
        return 5;
    }

    try {
        RunResult r = run_command(command, cfg);
        std::cout << r.output;
        return r.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 5;
    } catch (const ObstructionError& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return 3;
    } catch (const TruncationError& e) {
        std::cerr << "truncation: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
