#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "orbit/io.hpp"
#include "orbit/synth.hpp"
#include "orbit/verify.hpp"

namespace fs = std::filesystem;
using namespace orbit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + p.string());
    out << text;
}

fs::path default_cert_path(const fs::path& input) {
    fs::path p = input;
    p.replace_extension(".cert.json");
    return p;
}

struct Options {
    std::string input;
    std::string cert;  // verify only
    std::string output;
    std::string batch_dir;
    std::string format = "json";
    SynthConfig cfg;
};

int run_decide_one(const fs::path& input, const Options& opt, std::ostream& log) {
    OrbitInstance inst = parse_instance_json(read_file(input));
    ReachResult r = decide_reachability(inst, opt.cfg.search_bound);
    std::ostringstream os;
    switch (r.status) {
        case Reachability::Reachable: os << "REACHABLE n=" << r.n; break;
        case Reachability::Unreachable: os << "UNREACHABLE"; break;
        case Reachability::UnreachableRelativeToClosure:
            os << "UNREACHABLE (relative to the computed orbit closure)";
            break;
        case Reachability::Indeterminate:
            os << "INDETERMINATE (searched to n = " << r.bound << ")";
            break;
    }
    if (!r.note.empty()) os << "  [" << r.note << "]";
    log << input.string() << ": " << os.str() << "\n";
    if (!opt.output.empty()) {
        std::ostringstream j;
        j << "{\n  \"status\": \"" << os.str() << "\",\n  \"n\": " << r.n
          << ",\n  \"bound\": " << r.bound << "\n}\n";
        write_file(opt.output, j.str());
    }
    return kExitOk;
}

int run_synth_one(const fs::path& input, const Options& opt, std::ostream& log) {
    OrbitInstance inst = parse_instance_json(read_file(input));
    SynthCertificate cert;
    try {
        cert = synthesize(inst, opt.cfg);
    } catch (const std::runtime_error& e) {
        log << input.string() << ": verification of the synthesized invariant failed: "
            << e.what() << "\n";
        return kExitVerifyFailed;
    }
    fs::path out = opt.output.empty() ? default_cert_path(input) : fs::path(opt.output);
    write_file(out, certificate_to_json(cert, opt.cfg));
    if (opt.format == "smt2") {
        fs::path smt = out;
        smt.replace_extension(".smt2");
        write_file(smt, obligations_smt2(cert));
    }
    log << input.string() << ":\n" << certificate_summary(cert)
        << "certificate: " << out.string() << "\n";
    return kExitOk;
}

int run_verify_one(const Options& opt, std::ostream& log) {
    OrbitInstance inst = parse_instance_json(read_file(opt.input));
    SynthCertificate cert = parse_certificate_json(read_file(opt.cert));
    if (cert.instance.d != inst.d) throw std::invalid_argument("certificate is for a different dimension");
    for (int i = 0; i < inst.d; ++i) {
        bool same = cert.instance.x[i] == inst.x[i] && cert.instance.y[i] == inst.y[i];
        for (int j = 0; same && j < inst.d; ++j) same = cert.instance.A[i][j] == inst.A[i][j];
        if (!same) throw std::invalid_argument("certificate embeds a different instance");
    }
    VerifyConfig vc;
    vc.samples = opt.cfg.samples;
    vc.seed = opt.cfg.seed;
    VerifyReport rep = verify_certificate(cert, vc);
    if (!opt.output.empty()) write_file(opt.output, report_to_json(rep));
    if (rep.ok()) {
        log << "certificate verified\n";
        return kExitOk;
    }
    log << "certificate REJECTED: " << rep.detail << "\n";
    return kExitVerifyFailed;
}

int run_batch(const Options& opt, int (*one)(const fs::path&, const Options&, std::ostream&)) {
    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(opt.batch_dir)) {
        const fs::path& p = e.path();
        if (p.extension() != ".json") continue;
        if (p.string().size() > 10 && p.string().ends_with(".cert.json")) continue;
        inputs.push_back(p);
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) {
        std::cerr << "no instance files in " << opt.batch_dir << "\n";
        return kExitInputError;
    }
    std::atomic<size_t> next{0};
    std::atomic<int> worst{kExitOk};
    std::vector<std::string> logs(inputs.size());
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (size_t i = next++; i < inputs.size(); i = next++) {
                std::ostringstream log;
                Options local = opt;
                local.output.clear();  // per-file outputs, isolated
                int code;
                try {
                    code = one(inputs[i], local, log);
                } catch (const std::exception& e) {
                    log << inputs[i].string() << ": " << e.what() << "\n";
                    code = kExitInputError;
                }
                logs[i] = log.str();
                int cur = worst.load();
                while (code > cur && !worst.compare_exchange_weak(cur, code)) {}
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& l : logs) std::cout << l;
    return worst.load();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbit-Problem invariants: decide reachability, synthesize semialgebraic"
                 " non-reachability invariants, verify certificates"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--output", opt.output, "output path (default: derived from input)");
        c->add_option("--search-bound", opt.cfg.search_bound, "orbit search bound")
            ->check(CLI::PositiveNumber);
        c->add_option("--exponent-bound", opt.cfg.exponent_bound,
                      "relation-lattice completeness bound")
            ->check(CLI::PositiveNumber);
        c->add_option("--samples", opt.cfg.samples, "verification sample count")
            ->check(CLI::PositiveNumber);
        c->add_option("--seed", opt.cfg.seed, "sampling seed");
        c->add_option("--format", opt.format, "json | text | smt2")
            ->check(CLI::IsMember({"json", "text", "smt2"}));
    };

    CLI::App* decide = app.add_subcommand("decide", "decide reachability of y from x under A");
    decide->add_option("input", opt.input, "instance JSON");
    decide->add_option("--batch", opt.batch_dir, "process every instance in a directory");
    add_common(decide);

    CLI::App* synth = app.add_subcommand("synth", "synthesize and verify an invariant");
    synth->add_option("input", opt.input, "instance JSON");
    synth->add_option("--batch", opt.batch_dir, "process every instance in a directory");
    add_common(synth);

    CLI::App* verify = app.add_subcommand("verify", "check a certificate against an instance");
    verify->add_option("input", opt.input, "instance JSON")->required();
    verify->add_option("certificate", opt.cert, "certificate JSON")->required();
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (decide->parsed()) {
            if (!opt.batch_dir.empty()) return run_batch(opt, run_decide_one);
            if (opt.input.empty()) throw std::invalid_argument("decide: missing input file");
            return run_decide_one(opt.input, opt, std::cout);
        }
        if (synth->parsed()) {
            if (!opt.batch_dir.empty()) return run_batch(opt, run_synth_one);
            if (opt.input.empty()) throw std::invalid_argument("synth: missing input file");
            return run_synth_one(opt.input, opt, std::cout);
        }
        return run_verify_one(opt, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
