#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bgc/commands.hpp"
#include "bgc/config.hpp"

namespace {

/// "--a.b=v" or "--a.b v" pairs left over by the option parser.
std::vector<std::string> collect_overrides(const std::vector<std::string>& extras)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& a = extras[i];
        if (a.rfind("--", 0) != 0) throw bgc::DomainError("unexpected argument '" + a + "'");
        std::string body = a.substr(2);
        if (body.find('=') == std::string::npos) {
            if (i + 1 >= extras.size()) throw bgc::DomainError("override '" + a + "' needs a value");
            body += "=" + extras[++i];
        }
        out.push_back(body);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact dephasing channel for the free particle: evolution, observables, entropy, oracles"};
    app.allow_extras();
    std::string command, config_path, out_dir = ".";
    bool general = false;
    app.add_option("command", command, "evolve | moments | purity | entropy | compare | oracle-check")
        ->required()
        ->check(CLI::IsMember(bgc::command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--general", general, "evolve: propagate evolve.general_input with the kernel");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << bgc::error_report("usage", e.what()) << "\n";
        return bgc::kExitInvalid;
    }

    bgc::RunConfig cfg;
    try {
        std::ifstream is(config_path);
        if (!is) throw bgc::DomainError(config_path + ": cannot open");
        std::stringstream ss;
        ss << is.rdbuf();
        cfg = bgc::parse_config(ss.str(), collect_overrides(app.remaining()));
    } catch (const std::exception& e) {
        std::cerr << bgc::error_report("validation", e.what()) << "\n";
        return bgc::kExitInvalid;
    }
    bgc::CommandOptions opt;
    opt.out_dir = out_dir;
    opt.general = general;
    return bgc::run_command_checked(command, cfg, opt, std::cout, std::cerr);
}
