// scramble-lab: runs one experiment or built-in recipe and writes CSV tables
// plus a JSON metadata sidecar.

#include "scramble/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace scramble;

namespace {

// Errors are reported as one line: "error: <type>: <message>".
int fail(const std::string &type, std::string message, int code) {
    for(auto &ch : message)
        if(ch == '\n' || ch == '\r') ch = ' ';
    std::cerr << "error: " << type << ": " << message << '\n';
    return code;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ArgumentError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if(!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if(!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void print_recipes() {
    for(const auto &r : list_recipes()) std::cout << r.name << '\t' << r.figure << '\t' << r.description << '\n';
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Scrambling diagnostics for deformed Ising and free-fermion chains"};
    app.set_version_flag("--version", version);

    std::string              target;
    std::string              config_file;
    std::vector<std::string> overrides;
    std::string              out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned                 threads      = 1;
    bool                     print_config = false;

    app.add_option("target", target, "experiment kind, recipe name, or 'list-recipes'")->required();
    app.add_option("--config", config_file, "flat key=value configuration file");
    app.add_option("--set", overrides, "override one configuration key (key=value); repeatable");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed for the product-state ensemble");
    app.add_option("--threads", threads, "worker threads; results do not depend on this")->check(CLI::PositiveNumber);
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    try {
        app.parse(argc, argv);
    } catch(const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch(const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch(const CLI::ParseError &e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if(target == "list-recipes") {
            print_recipes();
            return 0;
        }

        ExperimentConfig config;
        bool             known = false;
        for(const auto &r : list_recipes())
            if(r.name == target) {
                config = r.config;
                known  = true;
            }
        if(!known) {
            for(const auto &[kind, name] : experiment_names())
                if(name == target) {
                    config.kind = kind;
                    known       = true;
                }
        }
        if(!known) {
            std::string valid;
            for(const auto &[kind, name] : experiment_names()) valid += name + ", ";
            for(const auto &r : list_recipes()) valid += r.name + ", ";
            throw ArgumentError("unknown experiment or recipe '" + target + "' (valid: " + valid + "list-recipes)");
        }

        if(!config_file.empty()) config.apply_text(read_file(config_file));
        for(const auto &kv : overrides) {
            const auto eq = kv.find('=');
            if(eq == std::string::npos) throw ArgumentError("--set expects key=value, got '" + kv + "'");
            config.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if(seed) config.seed = *seed;
        config.validate();

        if(print_config) {
            std::cout << config.serialize();
            return 0;
        }

        const auto start  = std::chrono::steady_clock::now();
        const auto tables = run_experiment(config, threads);
        const auto wall   = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        fs::create_directories(out_dir);
        nlohmann::ordered_json meta;
        nlohmann::ordered_json cfg;
        for(const auto &[k, v] : config.to_kv()) cfg[k] = v;
        meta["config"]         = cfg;
        meta["seed"]           = config.seed;
        meta["version"]        = version;
        meta["wall_time_s"]    = wall;
        meta["threads"]        = threads;
        meta["lapack_library"] = detail::LapackBackend::instance().library;
        meta["files"]          = nlohmann::json::array();
        for(const auto &t : tables) {
            const fs::path p = fs::path(out_dir) / (t.name + ".csv");
            write_file(p, t.csv());
            meta["files"].push_back(p.filename().string());
            std::cout << p.string() << '\n';
        }
        const fs::path sidecar = fs::path(out_dir) / (config.stem() + ".json");
        write_file(sidecar, meta.dump(2) + "\n");
        std::cout << sidecar.string() << '\n';
        return 0;
    } catch(const ResourceLimitError &e) {
        return fail("resource", e.what(), 3);
    } catch(const ArgumentError &e) {
        return fail("argument", e.what(), 2);
    } catch(const ValidationError &e) {
        return fail("validation", e.what(), 4);
    } catch(const std::exception &e) {
        return fail("runtime", e.what(), 1);
    }
}
