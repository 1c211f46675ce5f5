/*
   Copyright 2026 The divop Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "divop/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "divop/derham.hpp"
#include "divop/invariance.hpp"

namespace divop {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;
    std::uint32_t p = 0;
    std::vector<std::uint32_t> p_set{2, 3, 5, 7};
    std::vector<unsigned> heights;
    std::string n_policy = "minimal";
    std::uint64_t order = 1;
    std::uint64_t order_max = 7;
    std::vector<std::int64_t> weights;
    std::string mode = "homogeneous";
    std::string format;
    std::string out;
    std::string checkpoint;
    std::string input = "-";
    std::string family;
    unsigned m = 1;
    unsigned jobs = 1;
    bool full = false;
    bool verbose = false;
};

void require_prime(std::uint32_t p) {
    if (!gfp::is_prime(p)) throw UsageError(std::to_string(p) + " is not a prime");
}

void require_heights(const std::vector<unsigned>& Ns) {
    for (unsigned N : Ns)
        if (N == 0) throw UsageError("N must be positive");
}

std::uint64_t power(std::uint32_t p, unsigned e) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    return q;
}

unsigned single_height(const RunConfig& cfg) {
    if (cfg.heights.size() != 1) throw UsageError("expected a single --N");
    return cfg.heights.front();
}

// Output sink: stdout or a file, written once at the end.
class Writer {
  public:
    Writer(const std::string& path, std::ostream& out) : path_(path), out_(out) {}
    std::ostream& stream() { return buffer_; }
    void flush() {
        if (path_.empty() || path_ == "-") {
            out_ << buffer_.str();
            return;
        }
        std::ofstream f(path_, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write " + path_);
        f << buffer_.str();
    }

  private:
    std::string path_;
    std::ostream& out_;
    std::ostringstream buffer_;
};

void keep_cell(ClassificationTable& t, const std::vector<std::int64_t>& weights) {
    if (weights.empty()) return;
    const PrimeField F(t.p);
    const auto a = F(weights[0]), b = F(weights[1]);
    std::erase_if(t.cells, [&](const ClassificationCell& c) {
        return F(c.a) != a || F(c.b) != b;
    });
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_prime(cfg.p);
    require_heights(cfg.heights);
    const unsigned N = cfg.heights.empty() ? 1 : single_height(cfg);
    const auto start = std::chrono::steady_clock::now();
    ClassificationTable t = classify(cfg.p, N, cfg.order, mode_from_string(cfg.mode));
    keep_cell(t, cfg.weights);
    Writer w(cfg.out, out);
    const std::string format = cfg.format.empty() ? "markdown" : cfg.format;
    if (format == "csv")
        w.stream() << csv_header() << csv_rows(t, true);
    else if (format == "json")
        w.stream() << to_json(t).dump(2) << '\n';
    else
        w.stream() << markdown(t);
    w.flush();
    if (cfg.verbose)
        err << "classified p=" << cfg.p << " N=" << N << " k=" << cfg.order << " in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
    return exit_ok;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ScanConfig sc;
    sc.primes = cfg.p_set;
    for (std::uint32_t p : sc.primes) require_prime(p);
    sc.k_min = cfg.order;
    sc.k_max = cfg.order_max;
    sc.mode = mode_from_string(cfg.mode);
    sc.checkpoint = cfg.checkpoint;
    if (cfg.n_policy == "fixed") {
        if (cfg.heights.empty()) throw UsageError("--N-policy fixed needs --N");
        require_heights(cfg.heights);
        sc.heights = cfg.heights;
    } else if (!cfg.heights.empty()) {
        throw UsageError("--N requires --N-policy fixed");
    }

    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    Writer w(cfg.out, out);
    nlohmann::json tables = nlohmann::json::array();
    if (format == "csv") w.stream() << csv_header();
    const auto start = std::chrono::steady_clock::now();
    const ScanStats stats = scan(sc, [&](const ClassificationTable& t) {
        if (format == "csv")
            w.stream() << csv_rows(t, false);
        else if (format == "json")
            tables.push_back(to_json(t));
        else if (!t.empty())
            w.stream() << markdown(t) << '\n';
        if (cfg.verbose) err << "unit p=" << t.p << " k=" << t.k << " N=" << t.N << " done\n";
    });
    if (format == "json") w.stream() << tables.dump(2) << '\n';
    w.flush();
    if (cfg.verbose)
        err << stats.units << " units, " << stats.computed << " computed, " << stats.resumed << " resumed, "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// check

struct Instance {
    std::string family;
    std::uint32_t p;
    unsigned m;
    unsigned N;
};

class Checker {
  public:
    Checker(std::ostream& out, std::ostream& err, bool verbose) : out_(out), err_(err), verbose_(verbose) {}

    /// Brute-force invariance on O(1;N), optionally restricted to some fields.
    bool invariant(const Instance& at, const BilinearOperator& D, const std::vector<std::uint64_t>& fields = {}) {
        ++checked_;
        const auto defect = find_defect(D, at.N, fields);
        if (!defect) {
            if (verbose_) err_ << "ok " << describe(at, D) << '\n';
            return true;
        }
        out_ << "FAIL " << describe(at, D) << ": defect at X=u^(" << defect->s << ")d, f=u^(" << defect->r
             << "), g=u^(" << defect->t << "): " << defect->value << "·u^(" << defect->output << ")\n";
        return false;
    }

    /// D1 = lambda D2 with lambda != 0.
    bool proportional(const Instance& at, const BilinearOperator& D1, const BilinearOperator& D2,
                      const std::string& what) {
        ++checked_;
        const auto lambda = equal_up_to_scalar(D1, D2, at.N);
        if (lambda && !lambda->is_zero()) {
            if (verbose_) err_ << "ok " << what << " at " << describe(at, D1) << '\n';
            return true;
        }
        out_ << "FAIL " << describe(at, D1) << ": " << what << " does not hold\n";
        return false;
    }

    std::size_t checked() const noexcept { return checked_; }

  private:
    static std::string describe(const Instance& at, const BilinearOperator& D) {
        std::ostringstream os;
        os << at.family << " (p=" << at.p << ", m=" << at.m << ", N=" << at.N << ", a=" << D.a() << ", b=" << D.b()
           << ")";
        if (!D.name().empty()) os << " " << D.name();
        return os.str();
    }

    std::ostream& out_;
    std::ostream& err_;
    bool verbose_;
    std::size_t checked_ = 0;
};

std::vector<std::int64_t> weight_values(std::uint32_t p, const std::vector<std::int64_t>& chosen, std::size_t slot) {
    if (!chosen.empty()) return {chosen.at(slot)};
    std::vector<std::int64_t> all;
    for (std::uint32_t x = 0; x < p; ++x) all.push_back(x);
    return all;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_prime(cfg.p);
    require_heights(cfg.heights);
    const std::uint32_t p = cfg.p;
    const unsigned N = cfg.heights.empty() ? std::max(1u, cfg.m) : single_height(cfg);
    if (power(p, N) > 4096) throw UsageError("p^N above 4096 is too large to check");
    Checker check(out, err, cfg.verbose);
    bool ok = true;
    const Instance at{cfg.family, p, cfg.m, N};

    if (cfg.family == "bj") {
        if (cfg.m == 0 || cfg.m > N) throw UsageError("bj needs 1 <= m <= N");
        const auto D = named::bj(p, cfg.m);
        const auto D1 = named::bj_dual1(p, cfg.m);
        const auto D2 = named::bj_dual2(p, cfg.m);
        ok &= check.invariant(at, D);
        ok &= check.invariant(at, D1);
        ok &= check.invariant(at, D2);
        ok &= check.proportional(at, dual1(D), D1, "dual1(Bj) = Bj^{*1}");
        ok &= check.proportional(at, dual2(D), D2, "dual2(Bj) = Bj^{*2}");
    } else if (cfg.family == "gz") {
        if (cfg.m == 0 || !(cfg.m <= N || (p == 2 && cfg.m <= N + 1)))
            throw UsageError(p == 2 ? "gz needs 1 <= m <= N + 1 for p = 2" : "gz needs 1 <= m <= N");
        const auto D = named::gz(p, cfg.m);
        ok &= check.invariant(at, D);
        ok &= check.proportional(at, dual1(D), D, "dual1(Gz) = Gz");
        ok &= check.invariant(at, dual2(D));
    } else if (cfg.family == "L") {
        for (std::int64_t a : weight_values(p, cfg.weights, 1)) {
            const auto D = named::long_L(p, N, a);
            ok &= check.invariant(at, D);
            ok &= check.invariant(at, dual1(D));
            ok &= check.invariant(at, dual2(D));
        }
    } else if (cfg.family == "transvectant") {
        // The sl(2) fields d, u d, u^(2) d unless --full asks for all of vect(1;N).
        const std::vector<std::uint64_t> fields = cfg.full ? std::vector<std::uint64_t>{}
                                                           : std::vector<std::uint64_t>{0, 1, 2};
        for (std::int64_t a : weight_values(p, cfg.weights, 0))
            for (std::int64_t b : weight_values(p, cfg.weights, 1))
                ok &= check.invariant(at, named::transvectant(p, cfg.order, a, b), fields);
    } else if (cfg.family == "int-ops") {
        for (std::int64_t b : weight_values(p, cfg.weights, 1)) {
            const auto D = named::int_tensor_id(p, N, b);
            ok &= check.invariant(at, D);
            ok &= check.invariant(at, dual1(D));
            ok &= check.invariant(at, dual2(D));
        }
        const auto Dd = named::int_tensor_d(p, N);
        const auto Dii = named::int_tensor_int(p, N);
        ok &= check.invariant(at, Dd);
        ok &= check.invariant(at, dual1(Dd));
        ok &= check.invariant(at, dual2(Dd));
        ok &= check.invariant(at, Dii);
        ok &= check.proportional(at, dual1(Dii), Dii, "(∫⊗∫)^{*1} = ∫⊗∫");
    } else {
        throw UsageError("unknown family " + cfg.family);
    }

    if (!ok) return exit_verification_failed;
    out << "PASS " << cfg.family << " p=" << p << " m=" << cfg.m << " N=" << N << " (" << check.checked()
        << " checks)\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// dualize, cohomology

int cmd_dualize(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    nlohmann::json j;
    try {
        if (cfg.input == "-") {
            j = nlohmann::json::parse(std::cin);
        } else {
            std::ifstream f(cfg.input);
            if (!f) throw UsageError("cannot read " + cfg.input);
            j = nlohmann::json::parse(f);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed operator JSON: ") + e.what());
    }
    const BilinearOperator D = operator_from_json(j);
    require_heights(cfg.heights);
    // With --N the results drop the terms that vanish on O(1;N).
    auto trim = [&](const BilinearOperator& X) { return cfg.heights.empty() ? X : X.canonical(single_height(cfg)); };
    const nlohmann::json result = {{"dual1", to_json(trim(dual1(D)))},
                                   {"dual2", to_json(trim(dual2(D)))},
                                   {"swap", to_json(trim(swap_arguments(D)))}};
    Writer w(cfg.out, out);
    w.stream() << result.dump(2) << '\n';
    w.flush();
    return exit_ok;
}

int cmd_cohomology(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require_prime(cfg.p);
    require_heights(cfg.heights);
    if (cfg.m == 0) throw UsageError("m must be positive");
    std::vector<unsigned> Ns = cfg.heights.empty() ? std::vector<unsigned>{1} : cfg.heights;
    if (Ns.size() == 1) Ns.assign(cfg.m, Ns.front());
    if (Ns.size() != cfg.m) throw UsageError("--N needs one value or m values");
    const Shape shape(PrimeField(cfg.p), Ns);

    std::string heights;
    for (unsigned N : Ns) heights += (heights.empty() ? "" : ";") + std::to_string(N);

    const std::string format = cfg.format.empty() ? "markdown" : cfg.format;
    Writer w(cfg.out, out);
    nlohmann::json degrees = nlohmann::json::array();
    if (format == "csv") w.stream() << "m,N,p,q,dimH\n";
    if (format == "markdown")
        w.stream() << "### m = " << cfg.m << ", N = (" << heights << "), p = " << cfg.p << "\n\n"
                   << "| q | dim H^q | representatives |\n|---|---|---|\n";
    for (unsigned q = 0; q <= cfg.m; ++q) {
        const Cohomology H = cohomology(shape, q);
        // Degree 0 reports the reduced group: closed functions modulo constants.
        const std::size_t dim = q == 0 ? H.dimension - 1 : H.dimension;
        std::vector<std::string> reps;
        if (q > 0)
            for (const auto& r : H.representatives) reps.push_back(render(r));
        if (format == "csv") {
            w.stream() << cfg.m << ',' << heights << ',' << cfg.p << ',' << q << ',' << dim << '\n';
        } else if (format == "json") {
            degrees.push_back({{"q", q}, {"dim", dim}, {"standard_basis", H.standard_basis},
                               {"representatives", reps}});
        } else {
            std::string cell;
            for (const auto& r : reps) cell += (cell.empty() ? "" : "; ") + r;
            if (q > 0 && !H.standard_basis) cell += " (standard monomials fail)";
            w.stream() << "| " << q << " | " << dim << " | " << cell << " |\n";
        }
    }
    if (format == "json")
        w.stream() << nlohmann::json{{"m", cfg.m}, {"N", Ns}, {"p", cfg.p}, {"cohomology", degrees}}.dump(2)
                   << '\n';
    w.flush();
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Invariant bilinear differential operators in characteristic p", "divop"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"markdown", "csv", "json"};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "markdown, csv or json")
            ->check(CLI::IsMember(formats))
            ->envname("DIVOP_FORMAT");
        sub->add_option("--out", cfg.out, "Output file (default stdout)")->envname("DIVOP_OUT");
        sub->add_flag("--verbose,-v", cfg.verbose, "Progress on stderr");
    };
    auto add_p = [&](CLI::App* sub) { sub->add_option("--p", cfg.p, "Prime")->required()->envname("DIVOP_P"); };
    auto add_weights = [&](CLI::App* sub) {
        sub->add_option("--weights", cfg.weights, "Weights a,b")
            ->delimiter(',')
            ->expected(2)
            ->envname("DIVOP_WEIGHTS");
    };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", cfg.mode, "homogeneous or general")
            ->check(CLI::IsMember({"homogeneous", "general"}))
            ->envname("DIVOP_MODE");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "Classify one (p, N, order)");
    add_p(classify_cmd);
    classify_cmd->add_option("--N", cfg.heights, "Height")->expected(1)->envname("DIVOP_N");
    classify_cmd->add_option("--order", cfg.order, "Order k")->required()->envname("DIVOP_ORDER");
    add_weights(classify_cmd);
    add_mode(classify_cmd);
    add_common(classify_cmd);

    CLI::App* scan_cmd = app.add_subcommand("scan", "Classify a range of primes and orders");
    scan_cmd->add_option("--p-set", cfg.p_set, "Primes, comma separated")->delimiter(',')->envname("DIVOP_P_SET");
    scan_cmd->add_option("--order", cfg.order, "Smallest order")->envname("DIVOP_ORDER");
    scan_cmd->add_option("--order-max", cfg.order_max, "Largest order")->envname("DIVOP_ORDER_MAX");
    scan_cmd->add_option("--N-policy", cfg.n_policy, "minimal (every N up to the stable one) or fixed")
        ->check(CLI::IsMember({"minimal", "fixed"}))
        ->envname("DIVOP_N_POLICY");
    scan_cmd->add_option("--N", cfg.heights, "Heights for --N-policy fixed")->delimiter(',')->envname("DIVOP_N");
    scan_cmd->add_option("--checkpoint", cfg.checkpoint, "Checkpoint file for resuming")
        ->envname("DIVOP_CHECKPOINT");
    scan_cmd->add_option("--jobs", cfg.jobs, "Worker count")->check(CLI::PositiveNumber)->envname("DIVOP_JOBS");
    add_mode(scan_cmd);
    add_common(scan_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "Verify a named family by brute force");
    check_cmd->add_option("family", cfg.family, "bj, gz, L, transvectant or int-ops")
        ->required()
        ->check(CLI::IsMember({"bj", "gz", "L", "transvectant", "int-ops"}));
    add_p(check_cmd);
    check_cmd->add_option("--m", cfg.m, "Family parameter m")->envname("DIVOP_M");
    check_cmd->add_option("--N", cfg.heights, "Height")->expected(1)->envname("DIVOP_N");
    check_cmd->add_option("--order", cfg.order, "Transvectant order")->envname("DIVOP_ORDER");
    check_cmd->add_flag("--full", cfg.full, "Transvectants: test all of vect(1;N)");
    add_weights(check_cmd);
    check_cmd->add_flag("--verbose,-v", cfg.verbose, "List every passing check on stderr");

    CLI::App* dualize_cmd = app.add_subcommand("dualize", "Duals and swap of an operator given as JSON");
    dualize_cmd->add_option("input", cfg.input, "Operator JSON file, - for stdin");
    dualize_cmd->add_option("--N", cfg.heights, "Drop terms vanishing on O(1;N)")->expected(1)->envname("DIVOP_N");
    dualize_cmd->add_option("--out", cfg.out, "Output file (default stdout)")->envname("DIVOP_OUT");

    CLI::App* cohomology_cmd = app.add_subcommand("cohomology", "De Rham cohomology of O(m;N)");
    add_p(cohomology_cmd);
    cohomology_cmd->add_option("--m", cfg.m, "Number of variables")->envname("DIVOP_M");
    cohomology_cmd->add_option("--N", cfg.heights, "Heights: one value or m values")
        ->delimiter(',')
        ->envname("DIVOP_N");
    add_common(cohomology_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(cfg, out, err);
        if (scan_cmd->parsed()) return cmd_scan(cfg, out, err);
        if (check_cmd->parsed()) return cmd_check(cfg, out, err);
        if (dualize_cmd->parsed()) return cmd_dualize(cfg, out, err);
        if (cohomology_cmd->parsed()) return cmd_cohomology(cfg, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::logic_error& e) {
        err << "internal check failed: " << e.what() << '\n';
        return exit_verification_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace divop
