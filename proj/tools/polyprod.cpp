#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "polyprod/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"polyadic structure workbench: build, verify, and multiply "
                 "n-ary groups, (m,n)-rings, and their products"};
    app.require_subcommand(1);

    polyprod::cli::Options opt;
    if (const char* env = std::getenv("POLYPROD_SEED"))
        opt.seed = std::strtoull(env, nullptr, 10);
    app.add_option("--seed", opt.seed, "RNG seed for sampled checks");
    app.add_option("--samples", opt.samples,
                   "sampled instances per law (associativity uses 10x)");
    app.add_option("--exhaustive-budget", opt.exhaustive_budget,
                   "tuple cap below which laws are enumerated exhaustively");
    app.add_flag("--strict", opt.strict,
                 "treat a failed hetero associativity check as a construction error");
    app.add_option("--format", opt.format, "report format")
        ->check(CLI::IsMember({"json", "text"}));

    auto* verify =
        app.add_subcommand("verify", "check the laws of a structure file or catalog entry");
    std::string verify_input;
    verify->add_option("input", verify_input, "structure file, catalog name, or zM-sum-N")
        ->required();

    auto* product =
        app.add_subcommand("product", "full / mixed-arity / field product of two inputs");
    polyprod::cli::ProductArgs pargs;
    product->add_option("mode", pargs.mode, "full, mixed, or field")->required();
    product->add_option("a", pargs.a, "first input")->required();
    product->add_option("b", pargs.b, "second input")->required();
    product->add_option("--arity", pargs.arity, "mixed structures: common iterated arity n'");
    product->add_option("--add-arity", pargs.add_arity, "mixed rings: target addition arity m'");
    product->add_option("--mul-arity", pargs.mul_arity,
                        "mixed rings: target multiplication arity n'");
    product->add_option("--emit", pargs.emit_path, "also write the product document to this file");

    auto* hetero = app.add_subcommand("hetero", "hetero k-power along a placement quiver");
    polyprod::cli::HeteroArgs hargs;
    hetero->add_option("input", hargs.input, "single-operation structure input")->required();
    hetero->add_option("--k", hargs.k, "number of copies")->required();
    hetero->add_option("--ell-id", hargs.ell_id, "intact slots per output polyad");
    hetero->add_option("--quiver", hargs.quiver, "postlike, named, or search")
        ->check(CLI::IsMember({"postlike", "named", "search"}));
    hetero->add_option("--name", hargs.quiver_name, "catalog quiver for --quiver named");
    hetero->add_option("--budget", hargs.budget, "candidate cap for --quiver search");

    auto* table =
        app.add_subcommand("table", "quantization table of admissible (n, n') arity pairs");
    int k_max = 4;
    int n_max = 13;
    table->add_option("k_max", k_max, "largest power (default 4)");
    table->add_option("n_max", n_max, "largest input arity (default 13)");

    auto* catalog = app.add_subcommand("catalog", "list the built-in constructions");

    // Global flags remain usable after the subcommand name.
    for (auto* sub : {verify, product, hetero, table, catalog}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (verify->parsed()) return polyprod::cli::cmd_verify(verify_input, opt, std::cout);
    if (product->parsed()) return polyprod::cli::cmd_product(pargs, opt, std::cout);
    if (hetero->parsed()) return polyprod::cli::cmd_hetero(hargs, opt, std::cout);
    if (table->parsed()) return polyprod::cli::cmd_table(k_max, n_max, opt, std::cout);
    if (catalog->parsed()) return polyprod::cli::cmd_catalog(opt, std::cout);
    return 2;
}
