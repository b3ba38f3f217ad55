#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmlab/error.hpp"
#include "qmlab/executor.hpp"
#include "qmlab/harness.hpp"
#include "qmlab/machine.hpp"
#include "qmlab/machines.hpp"
#include "qmlab/spec_format.hpp"

namespace {

using namespace qmlab;

enum Exit : int {
    kOk = 0,
    kFailed = 1,
    kUsage = 2,
    kUnknownMachine = 3,
    kUnknownSuite = 4,
    kBadFile = 5,
    kStepLimit = 6,
    kFault = 7,
    kBadInput = 8,
};

constexpr const char* kExitHelp =
    "Exit status:\n"
    "  0  success (run accepted, all checks passed)\n"
    "  1  run rejected or a check failed\n"
    "  2  usage error\n"
    "  3  unknown machine\n"
    "  4  unknown suite or family\n"
    "  5  unreadable file or invalid machine spec\n"
    "  6  step limit exceeded\n"
    "  7  execution fault\n"
    "  8  input outside the machine's alphabet\n"
    "Environment: QMLAB_WORKERS sets the worker thread count.\n";

struct Failure {
    int code;
    std::string message;
};

/// Builtin name or path to a spec file.
Machine load_machine(const std::string& ref) {
    if (auto spec = builtin_machine(ref)) return Machine(std::move(*spec));
    std::error_code ec;
    if (!std::filesystem::is_regular_file(ref, ec)) {
        std::string names;
        for (const auto& n : builtin_names_help()) names += " " + n;
        throw Failure{kUnknownMachine, "unknown machine '" + ref + "' (builtins:" + names + ")"};
    }
    try {
        return Machine(load_spec_file(ref));
    } catch (const Error& e) {
        throw Failure{kBadFile, ref + ": " + e.what()};
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kBadFile, "cannot write " + path};
    return out;
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    return Format::text;
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::accept: return kOk;
        case Verdict::reject: return kFailed;
        case Verdict::step_limit_exceeded: return kStepLimit;
        case Verdict::fault: return kFault;
    }
    return kFailed;
}

struct RunArgs {
    std::string machine, input, input_file, trace, format = "text";
    std::uint64_t max_steps = 0;
};

int cmd_run(const RunArgs& a) {
    const Machine m = load_machine(a.machine);
    std::string input = a.input;
    if (!a.input_file.empty()) {
        std::ifstream in(a.input_file, std::ios::binary);
        if (!in) throw Failure{kBadFile, "cannot read " + a.input_file};
        std::getline(in, input);
        if (!input.empty() && input.back() == '\r') input.pop_back();
    }
    RunResult r;
    try {
        r = run(m, input, {a.max_steps, !a.trace.empty()});
    } catch (const InputError& e) {
        throw Failure{kBadInput, e.what()};
    }
    if (!a.trace.empty()) {
        auto out = open_out(a.trace);
        write_trace_csv(out, *r.trace);
    }
    std::size_t max_len = 0;
    for (auto l : r.max_lengths) max_len = std::max(max_len, l);
    const Format f = parse_format(a.format);
    if (f == Format::json) {
        nlohmann::json doc = {{"machine", a.machine},   {"verdict", to_string(r.verdict)},
                              {"output", r.output},     {"steps", r.steps},
                              {"consumed", r.input_consumed}, {"max_len", max_len}};
        if (!r.fault.empty()) doc["fault"] = r.fault;
        std::cout << doc.dump(2) << '\n';
    } else if (f == Format::csv) {
        std::cout << "verdict,output,steps,consumed,max_len\n"
                  << to_string(r.verdict) << ',' << r.output << ',' << r.steps << ',' << r.input_consumed << ','
                  << max_len << '\n';
    } else {
        std::cout << "verdict: " << to_string(r.verdict) << '\n'
                  << "output: " << r.output << '\n'
                  << "steps: " << r.steps << '\n'
                  << "consumed: " << r.input_consumed << '\n'
                  << "max_len: " << max_len << '\n';
        if (!r.fault.empty()) std::cout << "fault: " << r.fault << '\n';
    }
    return exit_for(r.verdict);
}

struct VerifyArgs {
    VerifyOptions options;
    std::string format = "text", batch, machine, out;
};

int cmd_verify(VerifyArgs a) {
    VerifyReport report;
    if (!a.batch.empty()) {
        if (a.machine.empty()) throw Failure{kUsage, "--batch needs --machine"};
        const Machine m = load_machine(a.machine);
        std::ifstream in(a.batch, std::ios::binary);
        if (!in) throw Failure{kBadFile, "cannot read " + a.batch};
        try {
            report = verify_batch(m, read_batch(in), a.options.workers);
        } catch (const ParseError& e) {
            throw Failure{kBadFile, a.batch + ": " + e.what()};
        }
    } else {
        if (a.options.suite.empty()) throw Failure{kUsage, "verify needs --suite or --batch"};
        try {
            report = run_verify(a.options);
        } catch (const std::invalid_argument& e) {
            throw Failure{kUnknownSuite, e.what()};
        }
    }
    const std::string text = format_report(report, parse_format(a.format));
    if (a.out.empty()) {
        std::cout << text;
    } else {
        open_out(a.out) << text;
    }
    return report.passed() ? kOk : kFailed;
}

struct BenchArgs {
    std::string machine, format = "csv", out;
    unsigned min_exp = 8, max_exp = 16;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a) {
    if (!builtin_machine(a.machine)) throw Failure{kUnknownMachine, "bench needs a builtin machine, got '" + a.machine + "'"};
    if (a.min_exp > a.max_exp || a.max_exp > 24) throw Failure{kUsage, "bad size range"};
    const BenchReport report = run_bench(a.machine, power_sizes(a.min_exp, a.max_exp), a.seed);
    const std::string text = format_bench(report, a.format == "json" ? Format::json : Format::csv);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        open_out(a.out) << text;
    }
    for (const auto& r : report.rows)
        if (r.verdict != Verdict::accept) return exit_for(r.verdict);
    return kOk;
}

struct GenArgs {
    std::string family, out;
    std::size_t k = 3, count = 100;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
    std::vector<BatchCase> cases;
    try {
        cases = gen_batch(a.family, a.k, a.count, a.seed);
    } catch (const std::invalid_argument& e) {
        throw Failure{a.family == "lk" ? kUsage : kUnknownSuite, e.what()};
    }
    if (a.out.empty()) {
        write_batch(std::cout, cases);
    } else {
        auto out = open_out(a.out);
        write_batch(out, cases);
    }
    return kOk;
}

int cmd_show(const std::string& ref) {
    const Machine m = load_machine(ref);
    std::cout << format_spec(m.spec());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Queue, pushdown and tape machine lab: run, verify, benchmark, generate."};
    app.footer(kExitHelp);
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::uint64_t max_steps = 0;
    std::string trace_path, format;

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a machine on one input word");
    run_cmd->add_option("-m,--machine", run_args.machine, "Builtin name or spec file")->required();
    auto* input_opt = run_cmd->add_option("-i,--input", run_args.input, "Input word");
    run_cmd->add_option("--input-file", run_args.input_file, "Read the input word from the first line of a file")
        ->excludes(input_opt);
    run_cmd->add_option("--max-steps", max_steps, "Step limit (default 64*(n+1)^2)");
    run_cmd->add_option("--trace", trace_path, "Write a per-step CSV trace to this path");
    run_cmd->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    run_cmd->add_option("--seed", seed, "Unused; accepted for uniformity");

    VerifyArgs verify_args;
    auto& vo = verify_args.options;
    auto* verify_cmd = app.add_subcommand("verify", "Check machines against oracles and formulas");
    verify_cmd->add_option("-s,--suite", vo.suite, "lprime, fk, anbn, formulas, pi or all");
    verify_cmd->add_option("--k-max", vo.k_max, "Largest k (0: suite default)");
    verify_cmd->add_option("--cases", vo.cases, "Seeded cases (0: suite default)");
    verify_cmd->add_option("--seed", seed, "Run seed");
    verify_cmd->add_option("--all-words-len", vo.all_words_len, "lprime: exhaustive length bound");
    verify_cmd->add_option("--shape-len", vo.shape_len, "lprime: shaped-word length bound");
    verify_cmd->add_option("--anbn-len", vo.anbn_len, "anbn: exhaustive length bound");
    verify_cmd->add_option("--batch", verify_args.batch, "Verify a batch file instead of a suite");
    verify_cmd->add_option("-m,--machine", verify_args.machine, "Machine for --batch");
    verify_cmd->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    verify_cmd->add_option("-o,--out", verify_args.out, "Write the report here instead of stdout");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Measure step growth over power-of-two input sizes");
    bench_cmd->add_option("-m,--machine", bench_args.machine, "Builtin machine")->required();
    bench_cmd->add_option("--min-exp", bench_args.min_exp, "Smallest size 2^e (default 8)");
    bench_cmd->add_option("--max-exp", bench_args.max_exp, "Largest size 2^e (default 16)");
    bench_cmd->add_option("--seed", seed, "Run seed");
    bench_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_option("-o,--out", bench_args.out, "Write the report here instead of stdout");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Write a batch file of seeded instances");
    gen_cmd->add_option("-f,--family", gen_args.family, "lprime, lk or anbn")->required();
    gen_cmd->add_option("-k,--k", gen_args.k, "lprime: max |v|; lk: queue count; anbn: max n");
    gen_cmd->add_option("-n,--count", gen_args.count, "Number of base instances");
    gen_cmd->add_option("--seed", seed, "Run seed");
    gen_cmd->add_option("-o,--out", gen_args.out, "Output path (default stdout)");

    std::string show_ref;
    auto* show_cmd = app.add_subcommand("show", "Print a machine in the spec file format");
    show_cmd->add_option("machine", show_ref, "Builtin name or spec file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) {
            run_args.max_steps = max_steps;
            run_args.trace = trace_path;
            if (!format.empty()) run_args.format = format;
            return cmd_run(run_args);
        }
        if (*verify_cmd) {
            vo.seed = seed;
            if (!format.empty()) verify_args.format = format;
            return cmd_verify(verify_args);
        }
        if (*bench_cmd) {
            bench_args.seed = seed;
            if (!format.empty()) bench_args.format = format;
            return cmd_bench(bench_args);
        }
        if (*gen_cmd) {
            gen_args.seed = seed;
            return cmd_gen(gen_args);
        }
        if (*show_cmd) return cmd_show(show_ref);
    } catch (const Failure& f) {
        std::cerr << "qmlab: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "qmlab: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
