#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "smale/orbit.hpp"
#include "smale/report.hpp"
#include "smale/suites.hpp"

// exit codes: 0 all PASS, 1 any FAIL, 2 usage/resource error
int main(int argc, char** argv) {
    CLI::App app{"smaledual: Smale-space duality verification pipelines"};
    app.require_subcommand(1);

    std::string config_path, suite, out_path;
    CLI::App* run = app.add_subcommand("run", "execute one verification suite");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--suite", suite, "one of: axioms homoclinic partition projection operators wg ktheory duality pv")
        ->required();
    run->add_option("--out", out_path, "write the report JSON here");

    std::string diff_a, diff_b;
    CLI::App* diff = app.add_subcommand("diff", "field-level report diff, timings ignored");
    diff->add_option("left", diff_a, "first report")->required();
    diff->add_option("right", diff_b, "second report")->required();

    bool list_suites = false;
    CLI::App* suites_cmd = app.add_subcommand("suites", "list suite names");
    (void)suites_cmd;
    if (argc > 1 && std::string(argv[1]) == "suites") list_suites = true;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list_suites) {
            for (const auto& s : smale::suite_names()) std::cout << s << "\n";
            return 0;
        }
        if (run->parsed()) {
            bool known = false;
            for (const auto& s : smale::suite_names()) known = known || s == suite;
            if (!known) {
                std::cerr << "unknown suite: " << suite << "\n";
                return 2;
            }
            smale::ExperimentConfig cfg = smale::ExperimentConfig::from_file(config_path);
            smale::VerificationReport rep = smale::run_suite(cfg, suite);
            for (const auto& c : rep.checks) {
                const char* st = c.status == smale::CheckStatus::pass
                                     ? "PASS"
                                     : (c.status == smale::CheckStatus::fail ? "FAIL" : "SKIP");
                std::cout << st << " " << c.name;
                if (c.observed) std::cout << " observed=" << *c.observed;
                if (c.threshold) std::cout << " threshold=" << *c.threshold;
                if (!c.reason.empty()) std::cout << " (" << c.reason << ")";
                if (!c.witness.empty()) std::cout << " witness=" << c.witness;
                std::cout << "\n";
            }
            if (!out_path.empty()) rep.write(out_path);
            return rep.all_passed() ? 0 : 1;
        }
        if (diff->parsed()) {
            smale::DiffResult d = smale::compare_report_files(diff_a, diff_b);
            if (!d.comparable) {
                std::cerr << "reports not comparable: schema versions differ\n";
                return 2;
            }
            for (const auto& line : d.differences) std::cout << line << "\n";
            return d.empty() ? 0 : 1;
        }
    } catch (const smale::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const smale::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
