// Command-line front end: state preparation, Hadamard decoding experiments,
// number-system conversions, Gowers norms, quadratic learning, success
// probability analysis, and the acceptance self-test.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "laqcc/acceptance.hpp"
#include "laqcc/errors.hpp"
#include "laqcc/fourier.hpp"
#include "laqcc/hadamard.hpp"
#include "laqcc/noise.hpp"
#include "laqcc/numbersys.hpp"
#include "laqcc/primitives.hpp"
#include "laqcc/stateprep.hpp"

using namespace laqcc;
using nlohmann::ordered_json;

namespace {

uint64_t default_seed() {
    if (const char *env = std::getenv("LAQCC_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

void write_output(const std::string &path, const std::string &content) {
    std::string body = content;
    if (body.empty() || body.back() != '\n') {
        body.push_back('\n');
    }
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot write to " + path);
    }
    out << body;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<int> parse_digits(const std::string &csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stoi(item));
    }
    return out;
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0;
}

// --- prepare -------------------------------------------------------------------

int cmd_prepare(const std::string &family, uint32_t n, uint32_t k, uint64_t q,
                const std::string &mode_name, uint64_t seed, const std::string &out,
                bool emit_ir) {
    PrimitiveMode mode = mode_from_name(mode_name);
    RandomSource rng(seed);
    MeasureDriver driver = MeasureDriver::sampling(rng);
    if (emit_ir) {
        // expanded program exports for the measurement-assisted primitives
        if (family == "ghz") {
            write_output(out, ghz_laqcc_program(n).to_json());
            return 0;
        }
        if (family == "fanout") {
            write_output(out, fanout_program(n).to_json());
            return 0;
        }
        if (family == "parity") {
            write_output(out, parity_program(n).to_json());
            return 0;
        }
        if (family == "equal") {
            write_output(out, equal_program(n, k).to_json());
            return 0;
        }
        if (family == "or-reduction") {
            write_output(out, or_reduction_program(n).to_json());
            return 0;
        }
        if (family == "exact-or") {
            write_output(out, exact_or_program(n).to_json());
            return 0;
        }
        throw ValidationError(
            "--emit-ir supports ghz, fanout, parity, equal, or-reduction and exact-or");
    }
    StateSpec spec;
    spec.n = n;
    spec.k = k;
    spec.q = q;
    spec.mode = mode;
    if (family == "w") {
        spec.family = StateSpec::Family::W;
    } else if (family == "uniform") {
        spec.family = StateSpec::Family::UniformQ;
    } else if (family == "dicke-small") {
        spec.family = StateSpec::Family::DickeSmallK;
    } else if (family == "dicke-fact") {
        spec.family = StateSpec::Family::DickeFactoradic;
    } else if (family == "ghz") {
        QuantumState st = ghz_laqcc(n, mode, driver);
        write_output(out, st.dump_json());
        return 0;
    } else {
        throw ValidationError("unknown family: " + family);
    }
    QuantumState st = prepare(spec, driver);
    write_output(out, st.dump_json());
    return 0;
}

// --- decode-hadamard --------------------------------------------------------------

int cmd_decode(int k, int p, double bias, double delta, bool have_delta, int64_t trials,
               uint64_t seed, double list_eps, const std::string &out) {
    RandomSource rng(seed);
    Message x;
    x.p = p;
    x.k = k;
    x.coords.resize(k);
    for (auto &v : x.coords) {
        v = static_cast<int>(rng.next_below(static_cast<uint64_t>(p)));
    }
    Codeword clean = encode(x);
    NoiseChannelSpec spec;
    if (have_delta) {
        spec.model = NoiseChannelSpec::Model::WorstCaseFraction;
        spec.delta = delta;
    } else {
        spec.model = NoiseChannelSpec::Model::Symmetric;
        spec.rho = bias;
    }
    Codeword c = corrupt(clean, spec, rng);
    std::vector<double> probs = decode_distribution(c);
    int64_t hits = 0;
    for (int64_t t = 0; t < trials; t++) {
        hits += decode_sample(c, rng).coords == x.coords;
    }
    double freq = trials > 0 ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;

    if (ends_with(out, ".csv")) {
        std::ostringstream csv;
        csv << "z,probability\n";
        for (size_t z = 0; z < probs.size(); z++) {
            csv << z << "," << probs[z] << "\n";
        }
        write_output(out, csv.str());
        return 0;
    }
    ordered_json j;
    j["p"] = p;
    j["k"] = k;
    if (have_delta) {
        j["delta"] = delta;
    } else {
        j["bias"] = bias;
    }
    j["seed"] = seed;
    j["message"] = x.coords;
    j["distance"] = hamming_distance(clean, c);
    j["trials"] = trials;
    j["success_frequency"] = freq;
    j["distribution"] = probs;
    if (list_eps > 0.0) {
        auto list = list_decode(c, list_eps, rng);
        auto &jl = j["list"] = ordered_json::array();
        bool found = false;
        for (const auto &m : list) {
            jl.push_back(m.coords);
            found = found || m.coords == x.coords;
        }
        j["list_contains_message"] = found;
    }
    write_output(out, j.dump(2));
    return 0;
}

// --- numbers ---------------------------------------------------------------------

int cmd_numbers(const std::string &op, int64_t m, int n, int k, const std::string &digits_csv,
                const std::string &bits, const std::string &out) {
    ordered_json j;
    if (op == "fact-to-comb") {
        Factoradic y;
        y.n = n;
        y.digits = parse_digits(digits_csv);
        if (static_cast<int>(y.digits.size()) != n) {
            throw ValidationError("expected n digits");
        }
        j["input"] = y.digits;
        j["representation"] = "factoradic";
        j["output"] = fact_to_comb(y, k).str();
    } else if (op == "int-to-comb") {
        CombIndex c = int_to_comb(m, k);
        j["input"] = m;
        j["representation"] = "combinatorial-index";
        j["output"] = c.digits;
    } else if (op == "int-to-fact") {
        Factoradic y = int_to_factoradic(m, n);
        j["input"] = m;
        j["representation"] = "factoradic";
        j["output"] = y.digits;
    } else if (op == "fact-to-int") {
        Factoradic y;
        y.n = n;
        y.digits = parse_digits(digits_csv);
        j["input"] = y.digits;
        j["representation"] = "integer";
        j["output"] = factoradic_to_int(y).get_str();
    } else if (op == "rank") {
        WeightKString s = WeightKString::from_str(bits);
        j["input"] = bits;
        j["representation"] = "rank";
        j["output"] = rank_weightk(s).get_str();
    } else if (op == "unrank") {
        j["input"] = m;
        j["representation"] = "weight-k-string";
        j["output"] = unrank_weightk(m, n, k).str();
    } else {
        throw ValidationError("unknown numbers operation: " + op);
    }
    write_output(out, j.dump(2));
    return 0;
}

// --- gowers / learn-quadratic -------------------------------------------------------

int cmd_gowers(const std::string &file, int d, const std::string &out) {
    PhaseFunction f = PhaseFunction::from_json(slurp(file));
    ordered_json j;
    j["p"] = f.p;
    j["n"] = f.n;
    for (int dd = 1; dd <= d; dd++) {
        j["u" + std::to_string(dd)] = gowers_norm(f, dd);
    }
    write_output(out, j.dump(2));
    return 0;
}

ordered_json params_to_json(const QuadraticPhaseParams &q) {
    ordered_json j;
    j["p"] = q.p;
    j["n"] = q.n;
    j["M"] = q.M;
    j["b"] = q.b;
    j["c"] = q.c;
    return j;
}

int cmd_learn(const std::string &file, bool noisy, double eps, uint64_t seed,
              const std::string &make_example, int n, int p, const std::string &out) {
    if (!make_example.empty()) {
        RandomSource rng(seed);
        QuadraticPhaseParams planted = random_quadratic(p, n, rng);
        write_output(make_example, quadratic_phase(planted).to_json());
        write_output(out, params_to_json(planted).dump(2));
        return 0;
    }
    CountingOracle oracle{PhaseFunction::from_json(slurp(file))};
    QuadraticPhaseParams got;
    if (noisy) {
        RandomSource rng(seed);
        got = learn_quadratic_unique_radius(oracle, eps, rng);
    } else {
        got = learn_quadratic_noiseless(oracle);
    }
    ordered_json j = params_to_json(got);
    j["queries"] = oracle.queries;
    write_output(out, j.dump(2));
    return 0;
}

// --- analyze --------------------------------------------------------------------

int cmd_analyze(const std::string &target, const std::string &device_path, int64_t n,
                int64_t hybrid_k, const std::string &out) {
    DeviceParams dev = DeviceParams::load(device_path);
    std::ostringstream csv;
    csv << "protocol,n,probability,duration_us,verdict\n";
    auto duration_or_blank = [&](Protocol p) -> std::string {
        try {
            std::ostringstream s;
            s << duration_ns(p, n, dev) / 1000.0;
            return s.str();
        } catch (const ValidationError &) {
            return "";
        }
    };
    std::vector<Protocol> protos;
    if (target == "ghz") {
        protos = {Protocol::GhzAll, Protocol::GhzLinear, Protocol::GhzLaqcc};
        if (hybrid_k > 0) {
            protos.push_back(Protocol::GhzHybridAll);
            protos.push_back(Protocol::GhzHybridLinear);
        }
    } else if (target == "w") {
        protos = {Protocol::WDirect};
        if ((n & (n - 1)) == 0) {
            protos.push_back(Protocol::WLaqcc);
            protos.push_back(Protocol::WLaqccApprox);
        }
    } else {
        throw ValidationError("analyze target must be ghz or w");
    }
    // verdict: the registered protocol with the highest evaluated probability
    double best = -1.0;
    std::string winner;
    std::vector<double> values;
    for (Protocol p : protos) {
        int64_t kk = (p == Protocol::GhzHybridAll || p == Protocol::GhzHybridLinear) ? hybrid_k
                                                                                     : 0;
        double v = success_expr(p, n, kk).evaluate(dev);
        values.push_back(v);
        if (v > best) {
            best = v;
            winner = protocol_name(p);
        }
    }
    for (size_t i = 0; i < protos.size(); i++) {
        int64_t kk = (protos[i] == Protocol::GhzHybridAll ||
                      protos[i] == Protocol::GhzHybridLinear)
                         ? hybrid_k
                         : 0;
        (void)kk;
        csv << protocol_name(protos[i]) << "," << n << "," << values[i] << ","
            << duration_or_blank(protos[i]) << "," << winner << "\n";
    }
    write_output(out, csv.str());
    return 0;
}

// --- selftest --------------------------------------------------------------------

int cmd_selftest(uint64_t seed, const std::string &device_path) {
    auto results = run_acceptance(seed, device_path);
    bool all = true;
    for (const auto &r : results) {
        std::printf("[%s] %2d. %-28s %s\n", r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "selftest: all criteria passed" : "selftest: FAILURES");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"simulator and analysis toolkit for measurement-assisted shallow circuits"};
    app.require_subcommand(1);
    uint64_t seed = default_seed();

    // prepare
    auto *prepare_cmd = app.add_subcommand("prepare", "prepare and dump a quantum state");
    std::string family, mode_name = "ideal", out;
    uint32_t n = 1, k = 1;
    uint64_t q = 1;
    bool emit_ir = false;
    prepare_cmd
        ->add_option("family", family,
                     "w | uniform | dicke-small | dicke-fact | ghz; with --emit-ir also "
                     "fanout | parity | equal | or-reduction | exact-or")
        ->required();
    prepare_cmd->add_option("--n", n, "system size");
    prepare_cmd->add_option("--k", k, "Hamming weight for Dicke families");
    prepare_cmd->add_option("--q", q, "uniform superposition size");
    prepare_cmd->add_option("--mode", mode_name, "ideal | expanded");
    prepare_cmd->add_option("--seed", seed, "random seed (default: LAQCC_SEED or 0)");
    prepare_cmd->add_option("--out", out, "output file (default: stdout)");
    prepare_cmd->add_flag("--emit-ir", emit_ir, "emit the expanded program as JSON");

    // decode-hadamard
    auto *decode_cmd = app.add_subcommand("decode-hadamard", "run a seeded decoding experiment");
    int dk = 3, dp = 2;
    double bias = 1.0, delta = 0.0, list_eps = 0.0;
    int64_t trials = 1000;
    std::string dec_out;
    decode_cmd->add_option("--k", dk, "message dimension")->required();
    decode_cmd->add_option("--p", dp, "field characteristic");
    auto *bias_opt = decode_cmd->add_option("--bias", bias, "symmetric channel bias rho");
    auto *delta_opt =
        decode_cmd->add_option("--delta", delta, "worst-case corrupted fraction");
    decode_cmd->add_option("--trials", trials, "decode samples");
    decode_cmd->add_option("--seed", seed, "random seed");
    decode_cmd->add_option("--list-epsilon", list_eps, "also run list decoding at this eps");
    decode_cmd->add_option("--out", dec_out, "output file, .json or .csv");

    // numbers
    auto *numbers_cmd = app.add_subcommand("numbers", "number system conversions");
    std::string nop, digits_csv, bits, num_out;
    int64_t m = 0;
    int nn = 0, nk = 0;
    numbers_cmd
        ->add_option("operation", nop,
                     "fact-to-comb | int-to-comb | int-to-fact | fact-to-int | rank | unrank")
        ->required();
    numbers_cmd->add_option("--m", m, "integer input");
    numbers_cmd->add_option("--n", nn, "factoradic length / string length");
    numbers_cmd->add_option("--k", nk, "weight");
    numbers_cmd->add_option("--digits", digits_csv, "comma-separated digits, most significant first");
    numbers_cmd->add_option("--bits", bits, "bit string, most significant position first");
    numbers_cmd->add_option("--out", num_out, "output file (default: stdout)");

    // gowers
    auto *gowers_cmd = app.add_subcommand("gowers", "Gowers uniformity norms of a function file");
    std::string gfile, gout;
    int gd = 3;
    gowers_cmd->add_option("--file", gfile, "function JSON file")->required();
    gowers_cmd->add_option("--d", gd, "highest norm order (1..3)");
    gowers_cmd->add_option("--out", gout, "output file (default: stdout)");

    // learn-quadratic
    auto *learn_cmd = app.add_subcommand("learn-quadratic", "recover quadratic phase parameters");
    std::string lfile, lout, make_example;
    bool noisy = false;
    double leps = 0.3;
    int ln = 4, lp = 2;
    learn_cmd->add_option("--file", lfile, "function JSON file");
    learn_cmd->add_flag("--noisy", noisy, "use the majority-vote learner");
    learn_cmd->add_option("--epsilon", leps, "noise margin for the noisy learner");
    learn_cmd->add_option("--seed", seed, "random seed");
    learn_cmd->add_option("--make-example", make_example,
                          "write a random quadratic phase to this file instead of learning");
    learn_cmd->add_option("--n", ln, "dimension for --make-example");
    learn_cmd->add_option("--p", lp, "characteristic for --make-example");
    learn_cmd->add_option("--out", lout, "output file (default: stdout)");

    // analyze
    auto *analyze_cmd = app.add_subcommand("analyze", "closed-form success probabilities");
    std::string atarget, adevice = "devices/brisbane.toml", aout;
    int64_t an = 8, ak = 0;
    analyze_cmd->add_option("target", atarget, "ghz | w")->required();
    analyze_cmd->add_option("--device", adevice, "device parameter file (TOML or JSON)");
    analyze_cmd->add_option("--n", an, "system size");
    analyze_cmd->add_option("--hybrid-k", ak, "also analyze hybrid protocols with k blocks");
    analyze_cmd->add_option("--out", aout, "output file (default: stdout)");

    // selftest
    auto *selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    std::string sdevice = "devices/brisbane.toml";
    selftest_cmd->add_option("--device", sdevice, "device parameter file");
    selftest_cmd->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return 1;
    }

    try {
        if (prepare_cmd->parsed()) {
            return cmd_prepare(family, n, k, q, mode_name, seed, out, emit_ir);
        }
        if (decode_cmd->parsed()) {
            if (bias_opt->count() > 0 && delta_opt->count() > 0) {
                throw ValidationError("--bias and --delta are mutually exclusive");
            }
            return cmd_decode(dk, dp, bias, delta, delta_opt->count() > 0, trials, seed,
                              list_eps, dec_out);
        }
        if (numbers_cmd->parsed()) {
            return cmd_numbers(nop, m, nn, nk, digits_csv, bits, num_out);
        }
        if (gowers_cmd->parsed()) {
            return cmd_gowers(gfile, gd, gout);
        }
        if (learn_cmd->parsed()) {
            return cmd_learn(lfile, noisy, leps, seed, make_example, ln, lp, lout);
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(atarget, adevice, an, ak, aout);
        }
        if (selftest_cmd->parsed()) {
            return cmd_selftest(seed, sdevice);
        }
    } catch (const CapacityError &e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
