#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "pkoszul/cli.hpp"

namespace {

std::string read_all(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pkoszul::input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piecewise-Koszul analysis of graded quiver algebras"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    pkoszul::RunConfig cfg;
    std::string input = "-", format = "table", pd;
    int hdeg = 0, ideg = 0;
    std::uint32_t ch = 0;
    bool schema = false;
    app.add_flag("--schema", schema, "Print the input grammar and JSON schemas");
    auto* o_hdeg = app.add_option("--max-hdeg", hdeg, "Maximal homological degree N (default 8)");
    auto* o_ideg = app.add_option("--max-ideg", ideg, "Maximal internal degree D (default delta(N)+1 with --pd, else 2N)");
    auto* o_char = app.add_option("--char", ch, "Field characteristic when the input declares none (default 32003)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));
    auto* o_pd = app.add_option("--pd", pd, "Override (p,d), written p,d");

    auto add = [&](const std::string& name, const std::string& help) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("input", input, "Input file, '-' for stdin");
        return sc;
    };
    add("resolve", "Minimal resolution of A_0, printed as a Betti table");
    add("classify", "Koszul / d-Koszul / piecewise-Koszul verdict");
    add("ext", "Bigraded dimensions of Ext(A_0, A_0)");
    auto* yon = app.add_subcommand("yoneda", "Yoneda products Ext^i x Ext^j");
    yon->add_option("i", cfg.arg1)->required();
    yon->add_option("j", cfg.arg2)->required();
    yon->add_option("input", input, "Input file, '-' for stdin");
    add("generation", "Ext-degrees in which E(A) needs generators");
    add("module-classify", "Piecewise-Koszul test for a module")
        ->add_option("--module", cfg.module, "Document module, trivial, regular, radical, or syzygy:<n>");
    auto* ek = app.add_subcommand("ek", "Structure constants of the E_k subalgebra");
    ek->add_option("k", cfg.arg1)->required();
    ek->add_option("input", input, "Input file, '-' for stdin");
    ek->add_option("--n-max", cfg.n_max, "Highest degree n of E_k");
    auto* ar = app.add_subcommand("arities", "Bigrading-feasible A-infinity arities");
    ar->add_option("q_max", cfg.arg1)->required();
    ar->add_option("input", input, "Input file, '-' for stdin");
    auto* rl = app.add_subcommand("reduced2l", "Reduced (2,l) conditions");
    rl->add_option("l", cfg.arg1)->required();
    rl->add_option("input", input, "Input file, '-' for stdin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (schema) {
        std::cout << pkoszul::schema_text();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format == "json" ? pkoszul::OutputFormat::json : pkoszul::OutputFormat::table;
    try {
        if (o_hdeg->count()) cfg.max_hdeg = hdeg;
        if (o_ideg->count()) cfg.max_ideg = ideg;
        if (o_char->count()) cfg.characteristic = ch;
        if (o_pd->count()) cfg.pd = pkoszul::parse_pd(pd);
        return pkoszul::run(cfg, read_all(input), std::cout, std::cerr);
    } catch (const pkoszul::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
