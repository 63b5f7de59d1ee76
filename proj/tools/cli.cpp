#include "cli.hpp"

#include "chorefair/algorithms.hpp"
#include "chorefair/approx2.hpp"
#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generators.hpp"
#include "chorefair/io.hpp"
#include "chorefair/oracle.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace chorefair::cli {

namespace {

using io::Json;

// Raised for file-system problems so they surface with a stable name.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("IOError", message) {}
};

struct Options {
    std::uint64_t budget = kDefaultBudget;
    std::string out;
    bool trace = false;
    std::size_t workers = 1;

    // gen / bench
    std::string family;
    std::size_t n = 0;
    std::size_t m = 0;
    std::string K;
    std::string T;
    std::string eps;
    std::uint64_t seed = 0;
    std::uint64_t granularity = 100;
    std::string partition;
    std::string certificate;
    bool normalize = false;
    std::size_t trials = 1;

    // check / solve / cof
    std::string instance;
    std::string allocation;
    bool witness = false;
    std::string criterion;
    std::string alg;
    std::string goods_solver = "exact";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw IoError("cannot write " + opt.out);
    file << text;
    if (!file) throw IoError("write failed for " + opt.out);
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<std::int64_t> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        std::int64_t v = 0;
        const char* first = text.data() + start;
        const char* last = text.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (first == last || ec != std::errc() || ptr != last) {
            throw ParseError(what + ": bad integer '" + std::string(first, last) + "'");
        }
        values.push_back(v);
        start = end + 1;
    }
    return values;
}

PartitionInput partition_from(const Options& opt) {
    if (opt.partition.empty()) throw ParameterError("--partition is required for this family");
    PartitionInput p{parse_int_list(opt.partition, "--partition"), std::nullopt};
    if (!opt.certificate.empty()) {
        std::vector<int> labels;
        for (auto v : parse_int_list(opt.certificate, "--certificate")) labels.push_back(static_cast<int>(v));
        p.labels = std::move(labels);
    }
    if (!opt.T.empty()) {
        const Rational T(partition_target(p));
        if (parse_rational(opt.T) != T) {
            throw ParameterError("--T " + opt.T + " disagrees with partition target " + to_string(T));
        }
    }
    return p;
}

Rational require_rational(const std::string& text, const std::string& flag) {
    if (text.empty()) throw ParameterError(flag + " is required for this family");
    return parse_rational(text);
}

std::size_t require_n(const Options& opt) {
    if (opt.n == 0) throw ParameterError("--n is required for this family");
    return opt.n;
}

GeneratedInstance generate(const Options& opt, std::uint64_t seed) {
    const std::string& f = opt.family;
    if (f == "eqx-cof") return gen_eqx_cof(require_n(opt), require_rational(opt.K, "--K"));
    if (f == "eqx-hard") return gen_eqx_hard(partition_from(opt), require_n(opt), require_rational(opt.K, "--K"));
    if (f == "eq1-cof") return gen_eq1_cof(require_n(opt), require_rational(opt.eps, "--eps"));
    if (f == "eq1-hard") return gen_eq1_hard(partition_from(opt), require_n(opt), require_rational(opt.K, "--K"));
    if (f == "ef1-cof") {
        const Rational K = require_rational(opt.K, "--K");
        if (K.get_den() != 1 || !K.get_num().fits_ulong_p() || sgn(K) <= 0) {
            throw ParameterError("--K must be a positive integer for ef1-cof");
        }
        return gen_ef1_cof(require_n(opt), K.get_num().get_ui(), require_rational(opt.eps, "--eps"));
    }
    if (f == "ef1-hard") return gen_ef1_hard(partition_from(opt), require_n(opt), require_rational(opt.K, "--K"));
    if (f == "ef1-2hard") return gen_ef1_two_agent_hard(partition_from(opt), require_rational(opt.K, "--K"));
    if (f == "ef1-mult") return gen_ef1_mult_hard(partition_from(opt), require_n(opt), require_rational(opt.K, "--K"));
    if (f == "random") return gen_random(require_n(opt), opt.m, seed, opt.granularity);
    throw ParameterError("unknown family '" + f + "'");
}

std::string digest(const Instance& instance) { return sha256_hex(io::encode_instance(instance)); }

struct LoadedInstance {
    Instance instance;
    Json json;
};

LoadedInstance load_instance(const Options& opt) {
    if (opt.instance.empty()) throw ParameterError("--instance is required");
    Json j = io::parse_json(read_file(opt.instance));
    Instance instance = io::instance_from_json(j);
    return {std::move(instance), std::move(j)};
}

Allocation load_allocation(const Options& opt, const LoadedInstance& loaded) {
    const std::size_t items = loaded.instance.items();
    if (opt.witness) {
        if (!loaded.json.contains("meta") || !loaded.json["meta"].contains("witness")) {
            throw ParseError("instance has no meta.witness");
        }
        return io::allocation_from_json(loaded.json["meta"]["witness"], items);
    }
    if (opt.allocation.empty()) throw ParameterError("--allocation or --witness is required");
    Json j = io::parse_json(read_file(opt.allocation));
    // a RunReport carries its allocation under "allocation"
    if (j.is_object() && j.contains("allocation") && !j.contains("bundles")) {
        return io::allocation_from_json(j["allocation"], items);
    }
    return io::allocation_from_json(j, items);
}

Json trace_json(const RoundTrace& trace) {
    Json rounds = Json::array();
    for (const auto& r : trace.rounds) {
        rounds.push_back({{"giver", r.giver},
                          {"item", r.item},
                          {"receiver", r.receiver},
                          {"min_agent_cost", to_string(r.min_agent_cost)},
                          {"allocation", io::to_json(r.allocation)}});
    }
    return {{"initial", io::to_json(trace.initial)},
            {"initial_min_agent_cost", to_string(trace.initial_min_agent_cost)},
            {"rounds", rounds}};
}

Json gap_json(const GapReport& g) {
    Json j;
    j["criterion"] = std::string(to_string(g.criterion));
    j["opt_unconstrained"] = to_string(g.opt_unconstrained);
    j["opt_fair"] = g.opt_fair ? Json(to_string(*g.opt_fair)) : Json(nullptr);
    j["gap"] = g.gap ? Json(to_string(*g.gap)) : Json(nullptr);
    if (g.ratio_infinite) {
        j["ratio"] = "inf";
    } else {
        j["ratio"] = g.ratio ? Json(to_string(*g.ratio)) : Json(nullptr);
    }
    if (g.witness) j["witness"] = io::to_json(*g.witness);
    return j;
}

SearchOptions search_options(const Options& opt) { return {opt.budget, std::max<std::size_t>(opt.workers, 1)}; }

Rational eps_or(const Options& opt, const char* fallback) {
    return parse_rational(opt.eps.empty() ? std::string(fallback) : opt.eps);
}

struct SolveOutcome {
    Allocation allocation;
    Rational social_cost;
    Json trace;  // null when not requested or unavailable
};

SolveOutcome solve(const Instance& instance, const std::string& alg, const Options& opt) {
    if (alg == "optimal") {
        auto s = optimal_allocation(instance);
        return {std::move(s.allocation), std::move(s.social_cost), nullptr};
    }
    if (alg == "eq1-bounded") {
        require_normalized(instance);
        auto r = eq1_bounded(instance);
        Json t = opt.trace ? trace_json(r.trace) : Json(nullptr);
        return {std::move(r.allocation), std::move(r.social_cost), std::move(t)};
    }
    if (alg == "ef1-roundrobin") {
        require_normalized(instance);
        auto r = ef1_bounded(instance);
        Json t = nullptr;
        if (opt.trace) {
            Json shifts = Json::array();
            for (const auto& s : r.shifts) {
                shifts.push_back({{"order", s.order},
                                  {"allocation", io::to_json(s.allocation)},
                                  {"social_cost", to_string(s.social_cost)}});
            }
            t = {{"chosen_shift", r.shift}, {"shifts", shifts}};
        }
        return {std::move(r.allocation), std::move(r.social_cost), std::move(t)};
    }
    if (alg.rfind("oracle:", 0) == 0) {
        const Criterion c = parse_criterion(alg.substr(7));
        auto r = opt_fair(instance, c, search_options(opt));
        return {std::move(r.allocation), std::move(r.social_cost), nullptr};
    }
    if (alg == "approx-eq1") {
        auto r = eq1_scheme(instance, eps_or(opt, "1/4"), opt.budget);
        Json t = nullptr;
        if (opt.trace) {
            t = {{"districts", r.districts},
                 {"feasible_districts", r.feasible_districts},
                 {"best", {{"designated", r.best.designated},
                           {"removable", r.best.removable},
                           {"big_mask", r.best.big_mask}}}};
        }
        return {std::move(r.allocation), std::move(r.social_cost), std::move(t)};
    }
    if (alg == "approx-ef1") {
        if (opt.goods_solver != "exact") {
            throw ParameterError("unknown goods solver '" + opt.goods_solver + "'");
        }
        auto r = ef1_scheme(instance, eps_or(opt, "0"), nullptr, opt.budget);
        return {std::move(r.allocation), std::move(r.social_cost), nullptr};
    }
    throw ParameterError("unknown algorithm '" + alg + "'");
}

std::string join_command(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) {
        if (!s.empty()) s += ' ';
        s += a;
    }
    return s;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_gen(const Options& opt, std::ostream& out) {
    GeneratedInstance g = generate(opt, opt.seed);
    Json j = to_json(g);
    if (opt.normalize) {
        Json meta = j["meta"];
        j = io::to_json(chorefair::normalize(g.instance));
        meta["normalized_from_row_sum"] = meta["row_sum"];
        j["meta"] = meta;
    }
    emit(opt, j.dump(2) + "\n", out);
    return 0;
}

int cmd_check(const Options& opt, const std::string& command, std::ostream& out) {
    const LoadedInstance loaded = load_instance(opt);
    const Allocation a = load_allocation(opt, loaded);
    if (opt.criterion.empty()) throw ParameterError("--criterion is required");
    const Criterion c = parse_criterion(opt.criterion);
    const BundleCostTable table(loaded.instance, a);
    Json predicates;
    for (Criterion k : kAllCriteria) predicates[std::string(to_string(k))] = table.satisfies(k);
    const bool holds = table.satisfies(c);
    Json j = {{"command", command},
              {"digest", digest(loaded.instance)},
              {"criterion", std::string(to_string(c))},
              {"holds", holds},
              {"predicates", predicates},
              {"social_cost", to_string(social_cost(loaded.instance, a))}};
    emit(opt, j.dump(2) + "\n", out);
    return holds ? 0 : 1;
}

int cmd_solve(const Options& opt, const std::string& command, std::ostream& out) {
    const LoadedInstance loaded = load_instance(opt);
    if (opt.alg.empty()) throw ParameterError("--alg is required");
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome s = solve(loaded.instance, opt.alg, opt);
    Json j = {{"command", command},
              {"digest", digest(loaded.instance)},
              {"algorithm", opt.alg},
              {"allocation", io::to_json(s.allocation)},
              {"social_cost", to_string(s.social_cost)},
              {"elapsed_ms", elapsed_ms(start)}};
    if (!s.trace.is_null()) j["trace"] = s.trace;
    emit(opt, j.dump(2) + "\n", out);
    return 0;
}

int cmd_cof(const Options& opt, const std::string& command, std::ostream& out) {
    const LoadedInstance loaded = load_instance(opt);
    if (opt.criterion.empty()) throw ParameterError("--criterion is required");
    const Criterion c = parse_criterion(opt.criterion);
    const auto start = std::chrono::steady_clock::now();
    GapReport g = cof_gap(loaded.instance, c, search_options(opt));
    Json j = {{"command", command},
              {"digest", digest(loaded.instance)},
              {"algorithm", "oracle:" + std::string(to_string(c))},
              {"allocation", g.witness ? io::to_json(*g.witness) : Json(nullptr)},
              {"social_cost", g.opt_fair ? Json(to_string(*g.opt_fair)) : Json(nullptr)},
              {"elapsed_ms", elapsed_ms(start)},
              {"gap", gap_json(g)}};
    emit(opt, j.dump(2) + "\n", out);
    return 0;
}

std::string csv_cell(const std::optional<Rational>& v) { return v ? to_string(*v) : ""; }
std::string csv_decimal(const std::optional<Rational>& v) { return v ? to_decimal(*v, 12) : ""; }

// One trial's rows, already rendered.
std::string bench_trial(const Options& opt, std::size_t trial, std::uint64_t seed) {
    const GeneratedInstance g = generate(opt, seed);
    const Instance instance = chorefair::normalize(g.instance);
    const std::string dig = digest(instance);
    const Rational opt_sc = optimal_allocation(instance).social_cost;
    const SearchOptions search{opt.budget, 1};
    const bool two = instance.agents() == 2;

    struct Entry {
        Criterion criterion;
        std::string algorithm;
    };
    std::vector<Entry> plan;
    for (Criterion c : {Criterion::EQX, Criterion::EQ1, Criterion::EF1}) {
        plan.push_back({c, "oracle:" + std::string(to_string(c))});
        if (c == Criterion::EQ1) {
            plan.push_back({c, "eq1-bounded"});
            if (two) plan.push_back({c, "approx-eq1"});
        }
        if (c == Criterion::EF1) {
            plan.push_back({c, "ef1-roundrobin"});
            if (two) plan.push_back({c, "approx-ef1"});
        }
    }

    Options local = opt;
    local.trace = false;
    local.workers = 1;
    std::ostringstream rows;
    std::optional<Rational> fair;
    for (const auto& e : plan) {
        std::optional<Allocation> a;
        std::optional<Rational> sc;
        if (e.algorithm.rfind("oracle:", 0) == 0) {
            auto r = find_opt_fair(instance, e.criterion, search);
            fair = r ? std::optional<Rational>(r->social_cost) : std::nullopt;
            if (r) {
                a = r->allocation;
                sc = r->social_cost;
            }
        } else {
            SolveOutcome s = solve(instance, e.algorithm, local);
            a = std::move(s.allocation);
            sc = std::move(s.social_cost);
        }
        const std::optional<Rational> gap = sc ? std::optional<Rational>(*sc - opt_sc) : std::nullopt;
        const std::optional<Rational> excess =
            sc && fair ? std::optional<Rational>(*sc - *fair) : std::nullopt;
        const std::string holds = a ? (satisfies(instance, *a, e.criterion) ? "1" : "0") : "";
        rows << trial << ',' << seed << ',' << instance.agents() << ',' << instance.items() << ','
             << dig << ',' << to_string(e.criterion) << ',' << e.algorithm << ',' << csv_cell(sc)
             << ',' << csv_decimal(sc) << ',' << to_string(opt_sc) << ',' << csv_cell(fair) << ','
             << csv_cell(gap) << ',' << csv_decimal(gap) << ',' << csv_cell(excess) << ',' << holds
             << '\n';
    }
    return rows.str();
}

int cmd_bench(const Options& opt, std::ostream& out) {
    if (opt.family.empty()) throw ParameterError("--family is required");
    if (opt.trials == 0) throw ParameterError("--trials must be positive");
    Options bench = opt;
    if (bench.family == "random") {
        if (bench.n == 0) bench.n = 3;
        if (bench.m == 0) bench.m = 6;
    }

    std::mt19937_64 master(opt.seed);
    std::vector<std::uint64_t> seeds(opt.trials);
    for (auto& s : seeds) s = master();

    std::vector<std::string> rendered(opt.trials);
    std::vector<std::exception_ptr> failures(opt.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < opt.trials; t = next++) {
            try {
                rendered[t] = bench_trial(bench, t, seeds[t]);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(opt.workers, 1, opt.trials);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::string csv =
        "trial,seed,agents,items,digest,criterion,algorithm,social_cost,social_cost_decimal,"
        "opt,opt_fair,gap,gap_decimal,excess_over_opt_fair,satisfies\n";
    for (const auto& r : rendered) csv += r;
    emit(opt, csv, out);
    return 0;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
    return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Cost of fairness toolkit for chore allocation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--budget", opt.budget, "Cap on enumerated allocations");
    app.add_option("--out,-o", opt.out, "Write output to PATH instead of stdout");
    app.add_flag("--trace", opt.trace, "Attach the algorithm trace");
    app.add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);

    auto gen_flags = [&](CLI::App* sub) {
        sub->add_option("--family", opt.family, "Instance family")->required();
        sub->add_option("--n", opt.n, "Agents");
        sub->add_option("--m", opt.m, "Items (random)");
        sub->add_option("--K", opt.K, "Scale parameter K");
        sub->add_option("--T", opt.T, "Expected partition target (checked)");
        sub->add_option("--eps", opt.eps, "Epsilon as p/q");
        sub->add_option("--seed", opt.seed, "PRNG seed");
        sub->add_option("--granularity", opt.granularity, "Random cost denominator");
        sub->add_option("--partition", opt.partition, "Comma-separated Partition values");
        sub->add_option("--certificate", opt.certificate, "Comma-separated part labels");
    };

    CLI::App* gen = app.add_subcommand("gen", "Generate an instance");
    gen_flags(gen);
    gen->add_flag("--normalize", opt.normalize, "Scale rows to sum 1");

    CLI::App* check = app.add_subcommand("check", "Evaluate fairness predicates");
    check->add_option("--instance", opt.instance)->required();
    check->add_option("--allocation", opt.allocation);
    check->add_flag("--witness", opt.witness, "Use the witness in the instance metadata");
    check->add_option("--criterion", opt.criterion)->required();

    CLI::App* solve_cmd = app.add_subcommand("solve", "Run an allocation algorithm");
    solve_cmd->add_option("--instance", opt.instance)->required();
    solve_cmd->add_option("--alg", opt.alg,
                          "optimal|eq1-bounded|ef1-roundrobin|oracle:CRIT|approx-eq1|approx-ef1")
        ->required();
    solve_cmd->add_option("--eps", opt.eps, "Accuracy for approx-eq1 and approx-ef1");
    solve_cmd->add_option("--goods-solver", opt.goods_solver, "Goods solver for approx-ef1");

    CLI::App* cof = app.add_subcommand("cof", "Cost of fairness on one instance");
    cof->add_option("--instance", opt.instance)->required();
    cof->add_option("--criterion", opt.criterion)->required();

    CLI::App* bench = app.add_subcommand("bench", "Batch experiment to CSV");
    gen_flags(bench);
    bench->add_option("--trials", opt.trials, "Number of trials");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError: " << e.what() << "\n";
        return 2;
    }

    const std::string command = join_command(args);
    try {
        if (gen->parsed()) return cmd_gen(opt, out);
        if (check->parsed()) return cmd_check(opt, command, out);
        if (solve_cmd->parsed()) return cmd_solve(opt, command, out);
        if (cof->parsed()) return cmd_cof(opt, command, out);
        if (bench->parsed()) return cmd_bench(opt, out);
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: InternalError: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace chorefair::cli
