// Command-line front end: parameter analysis, key/query generation,
// offline respond/decode, attack experiments, reference-table emission,
// and the network server/client.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "cpir/analysis.hpp"
#include "cpir/attacks.hpp"
#include "cpir/wire.hpp"

using namespace cpir;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidParams = 2;
constexpr int kExitFormatError = 3;
constexpr int kExitNetworkError = 4;
constexpr int kExitBudgetExceeded = 5;

struct ParamFlags {
    uint32_t q = 4, s = 4, v = 2, n = 10, k = 5, m = 3, big_l = 8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--q", q, "field size, a power of two <= 256");
        cmd->add_option("--s", s, "extension degree");
        cmd->add_option("--v", v, "noise-space dimension (v < s)");
        cmd->add_option("--n", n, "code length");
        cmd->add_option("--k", k, "code dimension (k < n)");
        cmd->add_option("--m", m, "number of files");
        cmd->add_option("--L", big_l, "rows per file");
    }

    SchemeParams params() const { return SchemeParams{q, s, v, n, k, m, big_l}; }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw Error("cannot open for writing: " + path);
    return file;
}

void cmd_analyze(const SchemeParams& p) {
    p.validate();
    std::cout << "q=" << p.q << "\n"
              << "s=" << p.s << "\n"
              << "v=" << p.v << "\n"
              << "n=" << p.n << "\n"
              << "k=" << p.k << "\n"
              << "m=" << p.m << "\n"
              << "L=" << p.big_l << "\n"
              << "delta=" << p.delta() << "\n";
    BigRational exact = rate_exact(p);
    BigRational asymptotic = rate_asymptotic(p);
    std::cout << "rate_exact=" << exact.to_string() << "\n"
              << "rate_asymptotic=" << asymptotic.to_string() << "\n"
              << "upload_bits=" << upload_bits(p) << "\n"
              << "download_bits=" << download_bits(p) << "\n";
    std::cout << std::setprecision(10);
    std::cout << "ss_log2=" << ss_workfactor_log2(p.s, p.v, p.q) << "\n"
              << "ld_bound=" << ld_rank_bound(p.q, p.s, p.n, p.k) << "\n"
              << "equiv_field_log2=" << equiv_field_log2(p.q, p.s) << "\n";
}

void cmd_table(const std::string& out_path) {
    std::ofstream file;
    std::ostream& out = open_output(out_path, file);
    auto rows = build_table(reference_param_sets());
    const auto& ld = reference_ld_workfactors();
    out << " q   s   v    n   k  delta  rate    ss_workfactor  ld_workfactor\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const TableRow& r = rows[i];
        std::ostringstream line;
        line << std::setw(2) << r.q << std::setw(4) << r.s << std::setw(4) << r.v
             << std::setw(5) << r.n << std::setw(4) << r.k << std::setw(7) << r.delta << "  "
             << std::setw(6) << r.rate.to_string() << "  2^" << std::setw(12) << std::left
             << std::setprecision(7) << r.ss_log2 << std::right << " " << ld[i]
             << " [reported]";
        out << line.str() << "\n";
    }
    out << "\n";
    for (const TableRow& r : rows) {
        out << "row: q=" << r.q << " s=" << r.s << " v=" << r.v << " n=" << r.n
            << " k=" << r.k << " delta=" << r.delta << " rate_num=" << r.rate.num().to_string()
            << " rate_den=" << r.rate.den().to_string() << " ss_log2=" << std::setprecision(10)
            << r.ss_log2 << "\n";
    }
}

void cmd_sweep(uint32_t q, uint32_t s, uint32_t n, uint32_t k, uint32_t v_lo, uint32_t v_hi,
               const std::string& out_path) {
    std::ofstream file;
    std::ostream& out = open_output(out_path, file);
    write_sweep_csv(out, attack_sweep(q, s, n, k, v_lo, v_hi));
}

void cmd_gendb(const SchemeParams& p, uint64_t seed, const std::string& out_path) {
    Rng rng(seed);
    Database db = random_database(p, rng);
    wire::write_file(out_path, wire::encode_database(db));
    std::cout << "database: " << p.big_l << " x " << db.mat.cols << " symbols, written to "
              << out_path << "\n";
}

void cmd_query(const SchemeParams& p, uint32_t index_one_based, uint64_t seed,
               const std::string& out_path, const std::string& secret_path) {
    if (index_one_based == 0 || index_one_based > p.m)
        throw InvalidParams("file index must be in [1, m]");
    auto [query, secret] = build_query(p, index_one_based - 1, seed);
    wire::write_file(out_path, wire::encode_query(query, secret.field));
    wire::write_file(secret_path, wire::encode_secret(secret));
    std::cout << "query for file " << index_one_based << ": " << query.mat.rows << " x "
              << query.mat.cols << " symbols over F_" << p.q << "^" << p.s << "\n";
}

void cmd_respond(const std::string& db_path, const std::string& in_path,
                 const std::string& out_path) {
    Database db = wire::decode_database(wire::read_file(db_path));
    auto [query, field] = wire::decode_query(wire::read_file(in_path));
    Response resp = respond(db, query);
    wire::write_file(out_path, wire::encode_response(resp, field));
    std::cout << "response: " << resp.mat.rows << " x " << resp.mat.cols << " symbols\n";
}

void cmd_decode(const std::string& in_path, const std::string& secret_path,
                const std::string& out_path) {
    auto [resp, field] = wire::decode_response(wire::read_file(in_path));
    QuerySecret secret = wire::decode_secret(wire::read_file(secret_path));
    MatBase file = recover_file(resp, secret);
    std::string bytes(file.a.begin(), file.a.end());
    wire::write_file(out_path, bytes);
    std::cout << "recovered file " << secret.index + 1 << ": " << file.rows << " x "
              << file.cols << " symbols (" << bytes.size() << " bytes)\n";
}

void check_budget(const SchemeParams& p, uint64_t budget_log2) {
    BigInt candidates = gaussian_binomial(p.s, p.v, p.q);
    if (candidates > BigInt::pow2(budget_log2))
        throw BudgetExceeded("subspace candidate count exceeds 2^" +
                             std::to_string(budget_log2) +
                             "; these parameters are not desk-scale");
}

void cmd_attack(const std::string& kind, const SchemeParams& p, uint64_t trials, uint64_t seed,
                bool expose_secret, uint64_t budget_log2, const std::string& csv_path) {
    p.validate();
    check_budget(p, budget_log2);
    std::cout << std::setprecision(6);
    if (kind == "subspace") {
        if (!expose_secret)
            throw InvalidParams(
                "the white-box subspace attack needs --expose-secret to read the true noise "
                "space");
        std::ofstream csv;
        if (!csv_path.empty()) {
            csv.open(csv_path, std::ios::trunc);
            if (!csv) throw Error("cannot open for writing: " + csv_path);
            csv << "trial,target,verdict,subcode_dims\n";
        }
        Rng rng(seed);
        uint64_t with_truth = 0;
        uint64_t with_wrong = 0;
        int64_t expected_dim = expected_subcode_dim(p.m, p.delta(), p.n, p.s);
        for (uint64_t t = 0; t < trials; ++t) {
            Rng trial_rng = rng.fork(t);
            auto index = trial_rng.below(p.m);
            auto [query, secret] = build_query(p, index, trial_rng.next());
            AttackVerdict verdict =
                subspace_attack(secret.field, query, true_noise_guess(secret));
            if (verdict.recovered_index && *verdict.recovered_index == index) ++with_truth;
            if (csv.is_open()) {
                csv << t << "," << index + 1 << ",";
                if (verdict.recovered_index)
                    csv << *verdict.recovered_index + 1;
                else
                    csv << "none";
                for (int64_t dim : verdict.subcode_dims) csv << "," << dim;
                csv << "\n";
            }
            MatBase truth = part_rows(secret.basis, Part::noise);
            MatBase wrong = truth;
            while (wrong == truth)
                wrong = sample_subspace(secret.field.base(), p.v, p.s, trial_rng);
            AttackVerdict blind = subspace_attack(secret.field, query, SubspaceGuess{wrong});
            if (blind.recovered_index && *blind.recovered_index == index) ++with_wrong;
        }
        std::cout << "trials=" << trials << "\n"
                  << "successes=" << with_truth << "\n"
                  << "rate=" << static_cast<double>(with_truth) / trials << "\n"
                  << "bound=" << (expected_dim == 0 ? 1.0 : 0.0)
                  << " (distinguisher validity: expected random subcode dim = "
                  << expected_dim << ")\n"
                  << "wrong_guess_rate=" << static_cast<double>(with_wrong) / trials << "\n";
    } else if (kind == "guessing") {
        Rng rng(seed);
        GuessRateResult result = estimate_superspace_hit_rate(p, trials, rng);
        std::cout << "trials=" << result.trials << "\n"
                  << "successes=" << result.hits << "\n"
                  << "rate=" << result.rate << "\n"
                  << "bound=" << superspace_hit_prob(p.s, p.v, p.q).to_double() << "\n";
    } else if (kind == "ldrank") {
        Rng rng(seed);
        RankExperimentResult result = ld_rank_experiment(p, trials, rng);
        auto successes = static_cast<uint64_t>(result.freq_excluding * trials + 0.5);
        std::cout << "trials=" << result.trials << "\n"
                  << "successes=" << successes << "\n"
                  << "rate=" << result.freq_excluding << "\n"
                  << "bound=" << ld_rank_bound(p.q, p.s, p.n, p.k) << "\n"
                  << "freq_excluding=" << result.freq_excluding << "\n"
                  << "freq_including=" << result.freq_including << "\n";
    } else {
        throw InvalidParams("unknown attack kind: " + kind);
    }
}

void cmd_serve(const std::string& db_path, const std::string& addr, uint16_t port) {
    Database db = wire::decode_database(wire::read_file(db_path));
    wire::Server server(std::move(db));
    uint16_t bound = server.start(addr, port);
    std::cout << "serving on " << addr << ":" << bound << "\n" << std::flush;
    for (;;) std::this_thread::sleep_for(std::chrono::hours(1));
}

void cmd_fetch(const std::string& addr, uint16_t port, const std::string& in_path,
               const std::string& out_path) {
    auto [query, field] = wire::decode_query(wire::read_file(in_path));
    Response resp = wire::fetch(addr, port, query, field);
    wire::write_file(out_path, wire::encode_response(resp, field));
    std::cout << "response: " << resp.mat.rows << " x " << resp.mat.cols << " symbols\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"code-based single-server computational private information retrieval"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "closed-form rate and attack quantities");
    ParamFlags analyze_params;
    analyze_params.attach(analyze);

    // table
    auto* table = app.add_subcommand("table", "evaluate the built-in reference parameter sets");
    std::string table_out;
    table->add_option("--out", table_out, "output path (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "CSV of attack quantities over a range of v");
    uint32_t sweep_q = 32, sweep_s = 32, sweep_n = 100, sweep_k = 50;
    uint32_t sweep_v_lo = 10, sweep_v_hi = 31;
    std::string sweep_out;
    sweep->add_option("--q", sweep_q, "field size");
    sweep->add_option("--s", sweep_s, "extension degree");
    sweep->add_option("--n", sweep_n, "code length");
    sweep->add_option("--k", sweep_k, "code dimension");
    sweep->add_option("--v-lo", sweep_v_lo, "lowest v");
    sweep->add_option("--v-hi", sweep_v_hi, "highest v");
    sweep->add_option("--out", sweep_out, "output path (default stdout)");

    // gendb
    auto* gendb = app.add_subcommand("gendb", "generate a seeded random database file");
    ParamFlags gendb_params;
    gendb_params.attach(gendb);
    uint64_t gendb_seed = 1;
    std::string gendb_out = "db.cpir";
    gendb->add_option("--seed", gendb_seed, "generator seed");
    gendb->add_option("--out", gendb_out, "database file");

    // query
    auto* query = app.add_subcommand("query", "build a query and its secret");
    ParamFlags query_params;
    query_params.attach(query);
    uint32_t query_index = 1;
    uint64_t query_seed = 1;
    std::string query_out = "query.cpir";
    std::string query_secret = "secret.cpir";
    query->add_option("--index", query_index, "file to retrieve, 1-based");
    query->add_option("--seed", query_seed, "generator seed");
    query->add_option("--out", query_out, "query file");
    query->add_option("--secret", query_secret, "secret file");

    // respond
    auto* respond_cmd = app.add_subcommand("respond", "answer a query file against a database");
    std::string respond_db, respond_in, respond_out = "response.cpir";
    respond_cmd->add_option("--db", respond_db, "database file")->required();
    respond_cmd->add_option("--in", respond_in, "query file")->required();
    respond_cmd->add_option("--out", respond_out, "response file");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "recover the file from a response");
    std::string decode_in, decode_secret, decode_out = "file.bin";
    decode_cmd->add_option("--in", decode_in, "response file")->required();
    decode_cmd->add_option("--secret", decode_secret, "secret file")->required();
    decode_cmd->add_option("--out", decode_out, "recovered file bytes");

    // attack
    auto* attack = app.add_subcommand("attack", "run an attack experiment");
    std::string attack_kind = "subspace";
    ParamFlags attack_params;
    attack_params.q = 2;
    attack_params.s = 3;
    attack_params.v = 1;
    attack_params.n = 6;
    attack_params.k = 3;
    attack_params.m = 6;
    attack_params.big_l = 1;
    attack_params.attach(attack);
    uint64_t attack_trials = 50;
    uint64_t attack_seed = 1;
    uint64_t attack_budget = 20;
    bool expose_secret = false;
    std::string attack_out;
    attack->add_option("--kind", attack_kind, "subspace | guessing | ldrank");
    attack->add_option("--trials", attack_trials, "number of trials");
    attack->add_option("--seed", attack_seed, "generator seed");
    attack->add_option("--budget", attack_budget, "log2 of the candidate-space budget");
    attack->add_option("--out", attack_out, "per-trial CSV (subspace kind)");
    attack->add_flag("--expose-secret", expose_secret,
                     "allow white-box use of the query secret");

    // serve
    auto* serve = app.add_subcommand("serve", "serve a database over TCP");
    std::string serve_db, serve_addr = "127.0.0.1";
    uint16_t serve_port = 7311;
    serve->add_option("--db", serve_db, "database file")->required();
    serve->add_option("--addr", serve_addr, "listen address");
    serve->add_option("--port", serve_port, "listen port");

    // fetch
    auto* fetch = app.add_subcommand("fetch", "send a query file to a server");
    std::string fetch_addr = "127.0.0.1", fetch_in, fetch_out = "response.cpir";
    uint16_t fetch_port = 7311;
    fetch->add_option("--addr", fetch_addr, "server address");
    fetch->add_option("--port", fetch_port, "server port");
    fetch->add_option("--in", fetch_in, "query file")->required();
    fetch->add_option("--out", fetch_out, "response file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidParams;
    }

    try {
        if (*analyze) cmd_analyze(analyze_params.params());
        if (*table) cmd_table(table_out);
        if (*sweep) cmd_sweep(sweep_q, sweep_s, sweep_n, sweep_k, sweep_v_lo, sweep_v_hi, sweep_out);
        if (*gendb) cmd_gendb(gendb_params.params(), gendb_seed, gendb_out);
        if (*query)
            cmd_query(query_params.params(), query_index, query_seed, query_out, query_secret);
        if (*respond_cmd) cmd_respond(respond_db, respond_in, respond_out);
        if (*decode_cmd) cmd_decode(decode_in, decode_secret, decode_out);
        if (*attack)
            cmd_attack(attack_kind, attack_params.params(), attack_trials, attack_seed,
                       expose_secret, attack_budget, attack_out);
        if (*serve) cmd_serve(serve_db, serve_addr, serve_port);
        if (*fetch) cmd_fetch(fetch_addr, fetch_port, fetch_in, fetch_out);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudgetExceeded;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidParams;
    } catch (const RetryLimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidParams;
    } catch (const ConnectionFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetworkError;
    } catch (const ServerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetworkError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormatError;
    }
    return kExitOk;
}
