#pragma once

// Command-line front end.  Inputs are structure files, catalog names, or
// zM-sum-N derived-group names; commands construct and verify structures,
// build products, take hetero powers, and print the quantization table.
// Reports render as JSON with a stable field order (only time_ms fields
// vary between identical runs) or as plain text.  Exit codes: 0 all checks
// pass, 1 at least one law fails, 2 input/shape/construction error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace polyprod::cli {

struct Options {
    std::uint64_t seed = 0;       ///< RNG seed (--seed wins over POLYPROD_SEED)
    std::uint64_t samples = 200;  ///< sampled instances per law; associativity uses 10x
    std::uint64_t exhaustive_budget = 10'000'000;  ///< tuple cap for full enumeration
    bool strict = false;          ///< make a failed hetero associativity check fatal
    std::string format = "json";  ///< "json" or "text"
};

struct ProductArgs {
    std::string mode;  ///< "full", "mixed", or "field"
    std::string a;
    std::string b;
    std::optional<int> arity;      ///< mixed structures: target arity n'
    std::optional<int> add_arity;  ///< mixed rings: target m'
    std::optional<int> mul_arity;  ///< mixed rings: target n'
    std::optional<std::string> emit_path;  ///< also write the product document here
};

struct HeteroArgs {
    std::string input;
    int k = 2;
    int ell_id = 0;
    std::string quiver = "postlike";         ///< "postlike", "named", or "search"
    std::optional<std::string> quiver_name;  ///< catalog entry for "named"
    std::uint64_t budget = 4096;             ///< candidate cap for "search"
};

int cmd_verify(const std::string& input, const Options& opt, std::ostream& out);
int cmd_product(const ProductArgs& args, const Options& opt, std::ostream& out);
int cmd_hetero(const HeteroArgs& args, const Options& opt, std::ostream& out);
int cmd_table(int k_max, int n_max, const Options& opt, std::ostream& out);
int cmd_catalog(const Options& opt, std::ostream& out);

}  // namespace polyprod::cli
