// Command-line front end: runs scenario files and the built-in replication
// catalog, writing JSON reports and CSV traces.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "horolab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"horolab - metric functionals and fixed points on sequence spaces"};
    app.require_subcommand(1);

    horolab::RunOptions opts;
    std::string out_dir = ".";
    double tol = -1.0;
    long n = -1;
    std::int64_t seed = -1;
    app.add_option("--out", out_dir, "output directory for reports and traces");
    app.add_option("--tol", tol, "tolerance override");
    app.add_option("--n", n, "iteration budget override");
    app.add_option("--seed", seed, "random seed override");
    app.add_flag("--parallel", opts.parallel, "run independent scenarios concurrently");

    std::vector<std::string> files;
    CLI::App* run = app.add_subcommand("run", "run scenario files");
    run->fallthrough();
    run->add_option("files", files, "scenario JSON files")->required();

    std::vector<std::string> ids;
    CLI::App* rep = app.add_subcommand("replicate", "run built-in catalog scenarios");
    rep->fallthrough();
    rep->add_option("ids", ids, "catalog ids (or \"all\")")->required();

    CLI::App* list = app.add_subcommand("list", "list catalog ids");
    list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    opts.out_dir = out_dir;
    if (tol >= 0.0) opts.tol = tol;
    if (n >= 0) opts.n = n;
    if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);

    if (list->parsed()) {
        for (const std::string& id : horolab::replicate_ids()) std::cout << id << "\n";
        return 0;
    }
    if (run->parsed()) {
        std::vector<std::filesystem::path> paths(files.begin(), files.end());
        return horolab::run_files(paths, opts);
    }
    return horolab::run_replicates(ids, opts);
}
