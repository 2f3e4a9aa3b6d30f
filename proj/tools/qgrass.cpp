// qgrass: command-line front end. Every subcommand writes one JSON document
// (or JSON lines / CSV) to stdout or --out; failures print an error object
// on stderr and exit nonzero without touching --out.

#include "qgrass.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;
using namespace qgrass;

namespace {

constexpr const char* kSchema = "qgrass/1";
constexpr unsigned kMaxBasisAmbient = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t q = 2;
    std::string format = "json";
    std::string out;
    std::optional<std::uint64_t> seed;
};

json header(const char* command)
{
    return json{{"schema", kSchema}, {"command", command}};
}

std::uint64_t resolve_seed(const Common& c)
{
    if (c.seed)
        return *c.seed;
    if (const char* env = std::getenv("QGRASS_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("QGRASS_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

json number_or_infinite(double x)
{
    if (std::isinf(x))
        return "infinite";
    return x;
}

std::string csv_line(const std::vector<std::string>& cells)
{
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            s += ',';
        s += cells[i];
    }
    return s + '\n';
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void require_format(const Common& c, bool csv_ok)
{
    if (c.format == "csv" && !csv_ok)
        throw UsageError("this subcommand has no CSV output");
}

// ---------------------------------------------------------------------------

std::string run_qcoeff(const Common& c, unsigned n, const std::vector<unsigned>& parts)
{
    std::vector<unsigned> full = parts;
    unsigned sum = 0;
    for (unsigned k : parts)
        sum += k;
    if (sum > n)
        throw std::invalid_argument("parts sum to more than n");
    // a single part k is read as the binomial [n k]
    if (full.size() == 1)
        full.push_back(n - sum);
    else if (sum != n)
        throw std::invalid_argument("parts must sum to n");
    const ExactInt v = q_multinomial(FlagType(full), c.q);
    if (c.format == "json") {
        json j = header("qcoeff");
        j["q"] = c.q;
        j["n"] = n;
        j["parts"] = full;
        j["value"] = v.str();
        return j.dump() + "\n";
    }
    return v.str() + "\n";
}

struct SimulateOptions {
    unsigned n = 0;
    double theta = 1.0;
    std::uint64_t samples = 1;
    bool history = false;
    bool histogram = false;
    unsigned threads = 1;
};

template <typename Work>
void parallel_for(std::uint64_t count, unsigned threads, Work&& work)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 256))));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i)
            work(i, 0u);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::uint64_t i = t; i < count; i += threads)
                work(i, t);
        });
    }
    for (auto& th : pool)
        th.join();
}

json state_json(const gf::Field& field, const ProcessState& s)
{
    return json{{"n", s.step}, {"dim", s.current.dim()}, {"basis", gf::format_subspace(field, s.current)}};
}

std::string run_simulate(const Common& c, const SimulateOptions& o)
{
    if (!(o.theta >= 0.0))
        throw std::domain_error("theta must be nonnegative");
    const std::uint64_t seed = resolve_seed(c);
    const double qd = static_cast<double>(c.q);

    if (!o.histogram) {
        require_format(c, false);
        if (o.n > kMaxBasisAmbient)
            throw std::length_error("bases are only printed for n <= 64; use --histogram");
        const gf::Field field(c.q);
        std::vector<std::string> lines(o.samples);
        parallel_for(o.samples, o.threads, [&](std::uint64_t i, unsigned) {
            const Trajectory t = simulate(field, o.n, o.theta, seed, i, o.history);
            json j{{"schema", kSchema}, {"q", c.q}, {"theta", o.theta}, {"seed", seed},
                   {"replicate", i}, {"final", state_json(field, t.final_state())}};
            if (o.history) {
                json h = json::array();
                for (const auto& s : t.states)
                    h.push_back(state_json(field, s));
                j["history"] = std::move(h);
            }
            lines[i] = j.dump() + "\n";
        });
        std::string out;
        for (auto& l : lines)
            out += l;
        return out;
    }

    // Histogram mode. Subspace-level statistics are gathered when Gr(n) is small enough to rank.
    const bool per_subspace = o.n <= kMaxBasisAmbient &&
                              [&] {
                                  ExactInt total = 0;
                                  for (unsigned k = 0; k <= o.n; ++k)
                                      total += q_binomial(o.n, k, c.q);
                                  return total <= 1'000'000;
                              }();
    std::vector<unsigned> dims(o.samples);
    std::vector<ExactInt> ranks(per_subspace ? o.samples : 0);
    std::optional<gf::Field> field;
    if (per_subspace)
        field.emplace(c.q);
    parallel_for(o.samples, o.threads, [&](std::uint64_t i, unsigned) {
        if (per_subspace) {
            const Trajectory t = simulate(*field, o.n, o.theta, seed, i);
            dims[i] = t.final_state().current.dim();
            ranks[i] = gf::grassmannian_rank(c.q, t.final_state().current);
        } else {
            dims[i] = simulate_dimension(qd, o.n, o.theta, seed, i);
        }
    });
    std::vector<std::uint64_t> counts(o.n + 1, 0);
    for (unsigned k : dims)
        ++counts[k];
    const double N = static_cast<double>(o.samples);
    std::vector<double> exact(o.n + 1);
    double tv_dim = 0.0;
    for (unsigned k = 0; k <= o.n; ++k) {
        exact[k] = pmf(k, {o.n, o.theta, qd});
        tv_dim += std::abs(counts[k] / N - exact[k]);
    }
    tv_dim *= 0.5;

    std::optional<double> tv_subspace;
    if (per_subspace) {
        std::vector<std::map<ExactInt, std::uint64_t>> seen(o.n + 1);
        for (std::uint64_t i = 0; i < o.samples; ++i)
            ++seen[dims[i]][ranks[i]];
        double tv = 0.0;
        for (unsigned k = 0; k <= o.n; ++k) {
            const double each = std::exp(log_subspace_probability(k, o.n, o.theta, qd));
            for (const auto& [rank, cnt] : seen[k])
                tv += std::abs(cnt / N - each);
            const ExactInt unseen = q_binomial(o.n, k, c.q) - seen[k].size();
            tv += unseen.convert_to<double>() * each;
        }
        tv_subspace = 0.5 * tv;
    }

    if (c.format == "csv") {
        std::string out = csv_line({"dim", "count", "empirical", "exact"});
        for (unsigned k = 0; k <= o.n; ++k)
            out += csv_line({std::to_string(k), std::to_string(counts[k]), fmt(counts[k] / N), fmt(exact[k])});
        return out;
    }
    json j = header("simulate");
    j["q"] = c.q;
    j["theta"] = o.theta;
    j["n"] = o.n;
    j["seed"] = seed;
    j["samples"] = o.samples;
    j["counts"] = counts;
    j["exact"] = exact;
    j["tv_dim"] = tv_dim;
    j["tv_subspace"] = tv_subspace ? json(*tv_subspace) : json(nullptr);
    return j.dump() + "\n";
}

std::string run_mu_table(const Common& c, double theta)
{
    const MuTable t(theta, static_cast<double>(c.q));
    if (c.format == "csv") {
        std::string out = csv_line({"d", "mu", "cumulative"});
        for (unsigned d = 0; d <= t.d_max(); ++d)
            out += csv_line({std::to_string(d), fmt(t[d]), fmt(t.cumulative(d))});
        return out;
    }
    json j = header("mu-table");
    j["q"] = c.q;
    j["theta"] = theta;
    j["mu"] = t.values();
    j["tail"] = t.tail_bound();
    j["d_max"] = t.d_max();
    j["total"] = t.total();
    return j.dump() + "\n";
}

json typical_json(const TypicalSet& t)
{
    json j{{"n", t.n},
           {"epsilon", t.epsilon},
           {"delta_codim", t.delta_codim},
           {"exact_size", t.exact_size.str()},
           {"outside_mass", t.outside_mass}};
    j["limit_delta"] = t.limit_delta ? json(*t.limit_delta) : json(nullptr);
    j["continuity_point"] = t.continuity_point;
    if (t.bracket_low)
        j["bracket"] = {*t.bracket_low, *t.bracket_high};
    return j;
}

std::string run_typical(const Common& c, unsigned n, double epsilon, double theta)
{
    require_format(c, false);
    json j = header("typical");
    j["q"] = c.q;
    j["theta"] = theta;
    j.update(typical_json(typical_set(n, epsilon, theta, c.q)));
    return j.dump() + "\n";
}

std::string run_aep_check(const Common& c, const std::vector<unsigned>& ns, double epsilon,
                          double delta_tol, double theta)
{
    const double qd = static_cast<double>(c.q);
    std::string csv = csv_line({"n", "a_n", "max_gap", "log_size_A", "log_size_s", "b_n"});
    json reports = json::array();
    for (unsigned n : ns) {
        const AepReport r = check_aep(n, epsilon, delta_tol, theta, c.q);
        const TypicalSet ts = typical_set(n, epsilon, theta, c.q);
        const MinimalSet ms = greedy_min_set_size(n, epsilon, theta, c.q);
        const double la = log_q_exact(ts.exact_size, qd) / n;
        const double ls = ms.size > 0 ? log_q_exact(ms.size, qd) / n : 0.0;
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"d", row.d},
                            {"neg_log_prob_over_n", row.neg_log_prob_over_n},
                            {"target", row.target},
                            {"gap", row.gap},
                            {"g_over_n", row.g_over_n}});
        reports.push_back({{"n", n},
                           {"a_n", r.a_n},
                           {"max_gap", r.max_gap},
                           {"within_tolerance", r.within_tolerance()},
                           {"rows", rows},
                           {"typical", typical_json(ts)},
                           {"min_set_size", ms.size.str()},
                           {"b_n", ms.last_codim},
                           {"b_n_equals_a_n", ms.agrees_with_typical},
                           {"log_size_A_over_n", la},
                           {"log_size_s_over_n", ls}});
        csv += csv_line({std::to_string(n), std::to_string(r.a_n), fmt(r.max_gap), fmt(la), fmt(ls),
                         std::to_string(ms.last_codim)});
    }
    if (c.format == "csv")
        return csv;
    json j = header("aep-check");
    j["q"] = c.q;
    j["theta"] = theta;
    j["epsilon"] = epsilon;
    j["delta"] = delta_tol;
    j["reports"] = reports;
    return j.dump() + "\n";
}

std::string run_encode(const Common& c, unsigned n, double epsilon, double theta,
                       const std::string& text)
{
    require_format(c, false);
    const gf::Field field(c.q);
    const auto parsed = gf::parse_subspace(field, text, n);
    const BlockCode code(field, n, epsilon, theta);
    const auto r = code.encode(parsed.value);
    json j = header("code-encode");
    j["q"] = c.q;
    j["n"] = n;
    j["subspace"] = gf::format_subspace(field, parsed.value);
    j["canonical_input"] = parsed.was_canonical;
    j["codeword_length"] = code.codeword_length();
    j["word"] = r.word;
    j["typical"] = r.typical;
    return j.dump() + "\n";
}

std::string run_decode(const Common& c, unsigned n, double epsilon, double theta,
                       const std::string& word)
{
    require_format(c, false);
    const gf::Field field(c.q);
    const BlockCode code(field, n, epsilon, theta);
    const auto v = code.decode(word);
    json j = header("code-decode");
    j["q"] = c.q;
    j["n"] = n;
    j["word"] = word;
    j["subspace"] = gf::format_subspace(field, v);
    j["dim"] = v.dim();
    return j.dump() + "\n";
}

std::string run_mle(const Common& c, unsigned n, double tol, std::istream& in)
{
    require_format(c, false);
    std::vector<unsigned> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(first, last - first + 1);
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": not a nonnegative integer");
        samples.push_back(static_cast<unsigned>(std::stoul(tok)));
    }
    const auto est = mle_theta(samples, n, static_cast<double>(c.q), tol);
    json j = header("mle");
    j["q"] = c.q;
    j["n"] = n;
    j["samples"] = samples.size();
    j["sample_mean"] = est.sample_mean;
    j["theta"] = number_or_infinite(est.theta);
    j["residual"] = est.residual;
    return j.dump() + "\n";
}

std::string run_maxent(const Common& c, std::vector<double> energies, bool telescoped, double mean,
                       std::optional<unsigned> finite_n)
{
    require_format(c, false);
    if (telescoped)
        energies = energies_from_telescoped(energies);
    const EnergyModel model{energies, mean};
    const auto sol = solve(model);
    json j = header("maxent");
    j["energies"] = energies;
    j["mean"] = mean;
    j["g"] = sol.g;
    j["a"] = sol.a;
    j["b"] = sol.b;
    j["support"] = sol.active_support;
    j["entropy"] = sol.entropy;
    if (finite_n) {
        const auto rep = finite_n_check(model, *finite_n, c.q);
        j["finite_n"] = {{"n", rep.n},
                         {"q", c.q},
                         {"rounded", rep.rounded},
                         {"candidates", rep.candidates},
                         {"argmax", rep.argmax},
                         {"rounded_is_optimal", rep.rounded_is_optimal},
                         {"growth", rep.growth}};
    }
    return j.dump() + "\n";
}

std::string run_asymptotics(const Common& c, bool q_given, const std::vector<double>& probs,
                            const std::vector<unsigned>& ns)
{
    const ProbVector p(probs);
    const auto rows = q_given ? check_qmultinomial_asymptotics(p, c.q, ns)
                              : check_multinomial_asymptotics(p, ns);
    if (c.format == "csv") {
        std::string out = csv_line({"n", "value", "target"});
        for (const auto& r : rows)
            out += csv_line({std::to_string(r.n), fmt(r.value), fmt(r.target)});
        return out;
    }
    json j = header("asymptotics");
    j["kind"] = q_given ? "q-multinomial" : "multinomial";
    if (q_given)
        j["q"] = c.q;
    j["probs"] = probs;
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n}, {"parts", r.parts}, {"value", r.value}, {"target", r.target}});
    j["rows"] = arr;
    return j.dump() + "\n";
}

std::string run_growth(const Common& c, const std::vector<unsigned>& ns)
{
    const auto rows = grassmannian_growth(ns, c.q);
    if (c.format == "csv") {
        std::string out = csv_line({"n", "size", "value", "sandwich"});
        for (const auto& r : rows)
            out += csv_line({std::to_string(r.n), r.size.str(), fmt(r.value), r.sandwich_holds ? "1" : "0"});
        return out;
    }
    json j = header("growth");
    j["q"] = c.q;
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n}, {"size", r.size.str()}, {"value", r.value}, {"sandwich", r.sandwich_holds}});
    j["rows"] = arr;
    return j.dump() + "\n";
}

int fail(const std::string& code, const std::string& detail)
{
    std::cerr << json{{"error", code}, {"detail", detail}}.dump() << '\n';
    return 2;
}

void write_output(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(c.out);
    std::filesystem::path tmp = target;
    tmp += ".partial";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open " + tmp.string());
        f << text;
        if (!f)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"q-deformed information theory over finite fields"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* sub, bool with_seed = false) {
        sub->add_option("--q", c.q, "field order / deformation parameter (prime power >= 2)")
            ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{65536}));
        sub->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", c.out, "write output to this file (only on success)");
        if (with_seed)
            sub->add_option("--seed", c.seed, "root seed (overrides QGRASS_SEED; default 0)");
    };

    // qcoeff
    unsigned qc_n = 0;
    std::vector<unsigned> qc_parts;
    auto* qcoeff = app.add_subcommand("qcoeff", "exact q-binomial / q-multinomial coefficient");
    qcoeff->add_option("n", qc_n, "total dimension")->required();
    qcoeff->add_option("parts", qc_parts, "k (binomial) or k_1 ... k_s summing to n")->required();
    add_common(qcoeff);

    // simulate
    SimulateOptions so;
    auto* sim = app.add_subcommand("simulate", "simulate the Grassmannian process");
    sim->add_option("--n", so.n, "number of steps")->required();
    sim->add_option("--theta", so.theta, "theta >= 0");
    sim->add_option("--samples", so.samples, "number of independent trajectories")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--history", so.history, "include every intermediate state");
    sim->add_flag("--histogram", so.histogram,
                  "aggregate final dimensions; CSV columns: dim,count,empirical,exact");
    sim->add_option("--threads", so.threads, "worker threads (output is identical for any count)")
        ->check(CLI::Range(1u, 256u));
    add_common(sim, true);

    // mu-table
    double theta = 1.0;
    auto* mu_cmd = app.add_subcommand("mu-table", "limiting codimension law mu(d); CSV columns: d,mu,cumulative");
    mu_cmd->add_option("--theta", theta, "theta > 0");
    add_common(mu_cmd);

    // typical
    unsigned n = 0;
    double epsilon = 0.1;
    auto* typ = app.add_subcommand("typical", "typical subspace set A_n");
    typ->add_option("--n", n)->required();
    typ->add_option("--epsilon", epsilon);
    typ->add_option("--theta", theta);
    add_common(typ);

    // aep-check
    std::vector<unsigned> ns;
    double delta_tol = 0.5;
    auto* aep = app.add_subcommand(
        "aep-check", "equipartition and size checks; CSV columns: n,a_n,max_gap,log_size_A,log_size_s,b_n");
    aep->add_option("--n", ns, "one or more n")->required()->delimiter(',');
    aep->add_option("--epsilon", epsilon);
    aep->add_option("--delta", delta_tol);
    aep->add_option("--theta", theta);
    add_common(aep);

    // code-encode / code-decode
    std::string subspace_text, word;
    auto* enc = app.add_subcommand("code-encode", "encode a subspace of F_q^n as a q-ary word");
    enc->add_option("--n", n)->required();
    enc->add_option("--epsilon", epsilon);
    enc->add_option("--theta", theta);
    enc->add_option("--subspace", subspace_text, "RREF rows joined by ';' (empty for the zero space)")
        ->required();
    add_common(enc);
    auto* dec = app.add_subcommand("code-decode", "decode a q-ary word to a subspace");
    dec->add_option("--n", n)->required();
    dec->add_option("--epsilon", epsilon);
    dec->add_option("--theta", theta);
    dec->add_option("--word", word)->required();
    add_common(dec);

    // mle
    double tol = 1e-12;
    auto* mle = app.add_subcommand("mle", "maximum-likelihood theta from samples on stdin (one per line)");
    mle->add_option("--n", n)->required();
    mle->add_option("--tol", tol, "tolerance on the mean scale");
    add_common(mle);

    // maxent
    std::vector<double> energies;
    double mean_energy = 0.0;
    bool telescoped = false;
    std::optional<unsigned> finite_n;
    auto* me = app.add_subcommand("maxent", "maximize H_2 under a mean-energy constraint");
    me->add_option("--energies", energies)->required()->delimiter(',');
    me->add_option("--mean", mean_energy)->required();
    me->add_flag("--telescoped", telescoped, "energies are given as increments");
    me->add_option("--finite-n", finite_n, "also run the exact finite-n neighborhood check");
    add_common(me);

    // asymptotics
    std::vector<double> probs;
    auto* asy = app.add_subcommand("asymptotics",
                                   "growth of (q-)multinomial coefficients; CSV columns: n,value,target");
    asy->add_option("--probs", probs)->required()->delimiter(',');
    asy->add_option("--n", ns)->required()->delimiter(',');
    add_common(asy);

    // growth
    auto* gro = app.add_subcommand("growth", "growth of |Gr(n)|; CSV columns: n,size,value,sandwich");
    gro->add_option("--n", ns)->required()->delimiter(',');
    add_common(gro);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        return fail("usage", e.what());
    }

    try {
        std::string text;
        if (c.format == "text" && !qcoeff->parsed())
            throw UsageError("text format is only available for qcoeff");
        if (qcoeff->parsed()) {
            if (qcoeff->count("--format") == 0)
                c.format = "text";
            require_format(c, false);
            text = run_qcoeff(c, qc_n, qc_parts);
        } else if (sim->parsed()) {
            text = run_simulate(c, so);
        } else if (mu_cmd->parsed()) {
            text = run_mu_table(c, theta);
        } else if (typ->parsed()) {
            text = run_typical(c, n, epsilon, theta);
        } else if (aep->parsed()) {
            text = run_aep_check(c, ns, epsilon, delta_tol, theta);
        } else if (enc->parsed()) {
            text = run_encode(c, n, epsilon, theta, subspace_text);
        } else if (dec->parsed()) {
            text = run_decode(c, n, epsilon, theta, word);
        } else if (mle->parsed()) {
            text = run_mle(c, n, tol, std::cin);
        } else if (me->parsed()) {
            text = run_maxent(c, energies, telescoped, mean_energy, finite_n);
        } else if (asy->parsed()) {
            text = run_asymptotics(c, asy->count("--q") > 0, probs, ns);
        } else if (gro->parsed()) {
            text = run_growth(c, ns);
        }
        write_output(c, text);
    } catch (const UsageError& e) {
        return fail("usage", e.what());
    } catch (const std::length_error& e) {
        return fail("refused", e.what());
    } catch (const std::out_of_range& e) {
        return fail("out_of_range", e.what());
    } catch (const std::domain_error& e) {
        return fail("domain", e.what());
    } catch (const std::invalid_argument& e) {
        return fail("invalid_argument", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
