#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaugekit/analysis.hpp"
#include "gaugekit/cousin.hpp"
#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"
#include "gaugekit/json_io.hpp"

namespace gaugekit::cli {
namespace {

using io::format_double;

enum class Format { Json, Csv, Human };

// Thrown to leave a subcommand with a specific exit code and message.
struct Exit {
    int code;
    std::string message;
};

struct Common {
    std::vector<double> interval;
    std::string format = "json";
    std::string output;
    std::string trace;
};

struct Options {
    Common common;
    std::string gauge;
    std::string strategy = "hybrid";
    std::size_t max_cells = PartitionCaps{}.max_cells;
    std::size_t max_depth = PartitionCaps{}.max_depth;
    std::string file;
    std::string f;
    double y = 0.0;
    double tol = 1e-6;
    std::optional<double> lipschitz;
    bool want_max = false;
    bool want_min = false;
    std::optional<double> no_root;
    std::optional<double> bound;
};

Format parse_format(const std::string& s)
{
    if (s == "json") {
        return Format::Json;
    }
    if (s == "csv") {
        return Format::Csv;
    }
    return Format::Human;
}

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

constexpr const char* kCsvBanner = "# lossy: 10 significant digits; use --format json for exact replay\n";

Interval domain_of(const Common& c)
{
    if (c.interval.size() != 2) {
        throw Exit{kUsage, "--interval takes exactly two numbers"};
    }
    const double lo = c.interval[0];
    const double hi = c.interval[1];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw Exit{kUsage, "--interval needs finite endpoints with lo < hi"};
    }
    return Interval(lo, hi);
}

std::optional<std::size_t> env_max_steps()
{
    const char* raw = std::getenv("GAUGEKIT_MAX_STEPS");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0) {
        throw Exit{kUsage, "GAUGEKIT_MAX_STEPS must be a positive integer"};
    }
    return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Exit{kDataError, "cannot read " + path};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Common& c, const std::string& payload, std::ostream& out)
{
    if (c.output.empty()) {
        out << payload;
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
        throw Exit{kDataError, "cannot write " + c.output};
    }
    file << payload;
}

void write_trace(const Common& c, const std::vector<induction::StepRecord>& steps)
{
    if (c.trace.empty()) {
        return;
    }
    std::ofstream file(c.trace, std::ios::binary);
    if (!file) {
        throw Exit{kDataError, "cannot write " + c.trace};
    }
    file << io::trace_to_jsonl(steps);
}

double parse_positive(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    }
    catch (const std::exception&) {
        throw Exit{kDataError, "bad number in " + what + ": '" + text + "'"};
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw Exit{kDataError, "bad number in " + what + ": '" + text + "'"};
    }
    if (!(v > 0.0)) {
        throw Exit{kDataError, what + " must be positive, got " + text};
    }
    return v;
}

// const:<v> | pw:<b0:v0,b1:v1,...> | expr:<text>
Gauge parse_gauge(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw Exit{kDataError, "gauge spec must be const:<v>, pw:<b:v,...> or expr:<text>"};
    }
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "const") {
        return Gauge::constant(parse_positive(body, "constant gauge"));
    }
    if (kind == "pw") {
        std::vector<double> breakpoints;
        std::vector<double> values;
        std::stringstream items(body);
        std::string item;
        while (std::getline(items, item, ',')) {
            const auto sep = item.find(':');
            if (sep == std::string::npos) {
                throw Exit{kDataError, "piecewise gauge entries are <breakpoint>:<value>"};
            }
            const std::string bp = item.substr(0, sep);
            std::size_t used = 0;
            double b = 0.0;
            try {
                b = std::stod(bp, &used);
            }
            catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != bp.size()) {
                throw Exit{kDataError, "bad breakpoint '" + bp + "'"};
            }
            breakpoints.push_back(b);
            values.push_back(parse_positive(item.substr(sep + 1), "piecewise gauge value"));
        }
        return Gauge::piecewise(std::move(breakpoints), std::move(values));
    }
    if (kind == "expr") {
        return Gauge::expression(expr::parse(body));
    }
    throw Exit{kDataError, "unknown gauge kind '" + kind + "'"};
}

RealFunction as_function(const expr::Expr& e)
{
    return [e](double x) { return expr::eval(e, x); };
}

Modulus modulus_for(const Options& o, const expr::Expr& e, const Interval& dom)
{
    if (o.lipschitz) {
        return Modulus::lipschitz(*o.lipschitz);
    }
    try {
        return Modulus::lipschitz(expr::lipschitz_bound(e, dom));
    }
    catch (const NotDifferentiable& nd) {
        throw Exit{kDataError, std::string(nd.what()) + "; pass --lipschitz explicitly"};
    }
}

induction::InductionPolicy policy_for(std::vector<induction::StepRecord>& trace)
{
    induction::InductionPolicy policy;
    if (auto steps = env_max_steps()) {
        policy.max_steps = *steps;
    }
    policy.on_step = [&trace](const induction::StepRecord& r) { trace.push_back(r); };
    return policy;
}

std::string stall_reason(CreepStallReason r)
{
    return r == CreepStallReason::CellCapReached ? "cell_cap_reached" : "progress_underflow";
}

int cmd_partition(const Options& o, std::ostream& out)
{
    const Interval dom = domain_of(o.common);
    const Gauge gauge = parse_gauge(o.gauge);
    PartitionStrategy strategy;
    if (o.strategy == "greedy") {
        strategy.kind = StrategyKind::GreedyCreep;
    }
    else if (o.strategy == "bisection") {
        strategy.kind = StrategyKind::Bisection;
    }
    strategy.caps.max_cells = env_max_steps().value_or(o.max_cells);
    strategy.caps.max_depth = o.max_depth;

    auto result = fine_partition(gauge, dom, strategy);
    if (auto* failure = std::get_if<PartitionFailure>(&result)) {
        std::string diag = "{\"status\": \"stall\"";
        if (failure->creep) {
            diag += ", \"creep\": {\"frontier\": " + format_double(failure->creep->frontier) +
                    ", \"cells\": " + std::to_string(failure->creep->cells_so_far.size()) + ", \"reason\": \"" +
                    stall_reason(failure->creep->reason) + "\"}";
        }
        if (failure->bisection) {
            const Interval& cell = failure->bisection->deepest_cell;
            diag += ", \"bisection\": {\"deepest_cell\": {\"lo\": " + format_double(cell.lo()) +
                    ", \"hi\": " + format_double(cell.hi()) + "}, \"reason\": \"" +
                    (failure->bisection->cell_cap_reached ? "cell_cap_reached" : "depth_exceeded") + "\"}";
        }
        diag += "}\n";
        out << diag;
        return kPartitionStall;
    }

    const auto& p = std::get<TaggedPartition>(result);
    if (!validate_partition(p).ok() || !is_delta_fine(p, gauge).fine) {
        throw Exit{kInternal, "constructed partition failed its own fineness check"};
    }

    std::vector<induction::StepRecord> steps;
    for (const auto& c : p.cells) {
        steps.push_back({c.cell.lo(), c.cell.hi()});
    }
    write_trace(o.common, steps);

    std::string payload;
    switch (parse_format(o.common.format)) {
    case Format::Json: payload = io::partition_to_json(p); break;
    case Format::Csv:
        payload = kCsvBanner;
        payload += "lo,hi,tag\n";
        for (const auto& c : p.cells) {
            payload += short_number(c.cell.lo()) + "," + short_number(c.cell.hi()) + "," + short_number(c.tag) + "\n";
        }
        break;
    case Format::Human:
        payload = std::to_string(p.cells.size()) + " cells on [" + format_double(dom.lo()) + ", " +
                  format_double(dom.hi()) + "]\n";
        for (const auto& c : p.cells) {
            payload += "  [" + format_double(c.cell.lo()) + ", " + format_double(c.cell.hi()) + "] tag " +
                       format_double(c.tag) + "\n";
        }
        break;
    }
    emit(o.common, payload, out);
    return kOk;
}

int cmd_check(const Options& o, std::ostream& out)
{
    const Gauge gauge = parse_gauge(o.gauge);
    TaggedPartition p;
    try {
        p = io::partition_from_json(read_file(o.file));
    }
    catch (const FormatError& e) {
        throw Exit{kDataError, e.what()};
    }
    const auto report = validate_partition(p);
    std::string violations;
    bool fine = false;
    if (report.ok()) {
        const auto fineness = is_delta_fine(p, gauge);
        fine = fineness.fine;
        if (!fine) {
            violations = "{\"kind\": \"not_fine\", \"index\": " + std::to_string(*fineness.first_violation) +
                         ", \"margin\": " + format_double(fineness.margin) + "}";
        }
    }
    for (const auto& v : report.violations) {
        if (!violations.empty()) {
            violations += ", ";
        }
        nlohmann::json message = v.message;
        violations += std::string("{\"kind\": \"") + to_string(v.kind) + "\", \"index\": " + std::to_string(v.index) +
                      ", \"message\": " + message.dump() + "}";
    }
    out << "{\"valid\": " << (report.ok() ? "true" : "false") << ", \"fine\": " << (fine ? "true" : "false")
        << ", \"violations\": [" << violations << "]}\n";
    return report.ok() && fine ? kOk : kCheckFailed;
}

int cmd_root(const Options& o, std::ostream& out)
{
    const Interval dom = domain_of(o.common);
    const expr::Expr e = expr::parse(o.f);
    const Modulus mod = modulus_for(o, e, dom);
    std::vector<induction::StepRecord> trace;
    RootResult r{};
    try {
        r = find_root(as_function(e), o.y, dom, mod, o.tol, policy_for(trace));
    }
    catch (const NoSignChange& ns) {
        throw Exit{kNoSignChange, ns.what()};
    }
    write_trace(o.common, trace);
    std::string payload;
    switch (parse_format(o.common.format)) {
    case Format::Json:
        payload = "{\"c\": " + format_double(r.c) + ", \"residual_bound\": " + format_double(r.residual_bound) + "}\n";
        break;
    case Format::Csv:
        payload = std::string(kCsvBanner) + "c,residual_bound\n" + short_number(r.c) + "," +
                  short_number(r.residual_bound) + "\n";
        break;
    case Format::Human:
        payload = "root c = " + format_double(r.c) + " with |f(c) - y| <= " + format_double(r.residual_bound) + "\n";
        break;
    }
    emit(o.common, payload, out);
    return kOk;
}

int cmd_extremum(const Options& o, std::ostream& out)
{
    if (o.want_max == o.want_min) {
        throw Exit{kUsage, "pass exactly one of --max or --min"};
    }
    const Interval dom = domain_of(o.common);
    const expr::Expr e = expr::parse(o.f);
    const Modulus mod = modulus_for(o, e, dom);
    std::vector<induction::StepRecord> trace;
    const auto policy = policy_for(trace);
    const SupEstimate est = o.want_max ? approx_sup(as_function(e), dom, mod, o.tol, policy)
                                       : approx_inf(as_function(e), dom, mod, o.tol, policy);
    write_trace(o.common, trace);
    const char* kind = o.want_max ? "max" : "min";
    std::string payload;
    switch (parse_format(o.common.format)) {
    case Format::Json:
        payload = std::string("{\"kind\": \"") + kind + "\", \"lo\": " + format_double(est.lo) +
                  ", \"hi\": " + format_double(est.hi) + ", \"candidate\": " + format_double(est.candidate) + "}\n";
        break;
    case Format::Csv:
        payload = std::string(kCsvBanner) + "kind,lo,hi,candidate\n" + kind + "," + short_number(est.lo) + "," +
                  short_number(est.hi) + "," + short_number(est.candidate) + "\n";
        break;
    case Format::Human:
        payload = std::string(kind) + " f in [" + format_double(est.lo) + ", " + format_double(est.hi) +
                  "], attained value at x = " + format_double(est.candidate) + "\n";
        break;
    }
    emit(o.common, payload, out);
    return kOk;
}

std::string pieces_csv(const std::vector<CertificatePiece>& pieces)
{
    std::string s = std::string(kCsvBanner) + "lo,hi,s,fs,delta\n";
    for (const auto& p : pieces) {
        s += short_number(p.cell.lo()) + "," + short_number(p.cell.hi()) + "," + short_number(p.sample) + "," +
             short_number(p.value) + "," + short_number(p.radius) + "\n";
    }
    return s;
}

int cmd_certify(const Options& o, std::ostream& out)
{
    if (o.no_root.has_value() == o.bound.has_value()) {
        throw Exit{kUsage, "pass exactly one of --no-root or --bound"};
    }
    const Interval dom = domain_of(o.common);
    const expr::Expr e = expr::parse(o.f);
    const RealFunction f = as_function(e);
    const Modulus mod = modulus_for(o, e, dom);
    std::vector<induction::StepRecord> trace;
    const auto policy = policy_for(trace);
    const Format format = parse_format(o.common.format);

    auto stalled = [&](double c, induction::StallReason reason) {
        write_trace(o.common, trace);
        out << "{\"status\": \"stall\", \"c\": " << format_double(c) << ", \"reason\": \"" << to_string(reason)
            << "\"}\n";
        return kCertifyFailed;
    };

    std::string payload;
    try {
        if (o.no_root) {
            auto outcome = no_root_certificate(f, *o.no_root, dom, mod, policy);
            if (auto* stall = std::get_if<StallAtRoot>(&outcome)) {
                return stalled(stall->c, stall->reason);
            }
            const auto& cert = std::get<SignCertificate>(outcome);
            if (!verify_sign_certificate(cert, f, mod, dom)) {
                throw Exit{kInternal, "emitted sign certificate failed verification"};
            }
            payload = format == Format::Json ? io::certificate_to_json(cert)
                      : format == Format::Csv
                          ? pieces_csv(cert.pieces)
                          : std::string("f(x) ") + (cert.side == Side::Below ? "<" : ">") + " " +
                                format_double(cert.target) + " on the interval, " +
                                std::to_string(cert.pieces.size()) + " pieces\n";
        }
        else {
            auto outcome = bound_certificate(f, *o.bound, dom, mod, policy);
            if (auto* stall = std::get_if<StallNearMax>(&outcome)) {
                return stalled(stall->c, stall->reason);
            }
            const auto& cert = std::get<BoundCertificate>(outcome);
            if (!verify_bound_certificate(cert, f, mod, dom)) {
                throw Exit{kInternal, "emitted bound certificate failed verification"};
            }
            payload = format == Format::Json  ? io::certificate_to_json(cert)
                      : format == Format::Csv ? pieces_csv(cert.pieces)
                                              : "f(x) < " + format_double(cert.bound) + " on the interval, " +
                                                    std::to_string(cert.pieces.size()) + " pieces\n";
        }
    }
    catch (const TargetHitExactly& hit) {
        write_trace(o.common, trace);
        out << "{\"status\": \"target_hit\", \"s\": " << format_double(hit.s) << "}\n";
        return kCertifyFailed;
    }
    catch (const BoundViolated& v) {
        write_trace(o.common, trace);
        out << "{\"status\": \"bound_violated\", \"s\": " << format_double(v.s) << ", \"fs\": " << format_double(v.fs)
            << "}\n";
        return kCertifyFailed;
    }
    write_trace(o.common, trace);
    emit(o.common, payload, out);
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    io::Certificate cert;
    try {
        cert = io::certificate_from_json(read_file(o.file));
    }
    catch (const FormatError& e) {
        throw Exit{kDataError, e.what()};
    }
    const expr::Expr e = expr::parse(o.f);
    const RealFunction f = as_function(e);
    const auto& pieces = std::visit([](const auto& c) -> const std::vector<CertificatePiece>& { return c.pieces; }, cert);
    if (pieces.empty()) {
        out << "{\"verified\": false}\n";
        return kCheckFailed;
    }
    const Interval span(pieces.front().cell.lo(), pieces.back().cell.hi());
    if (!(span.lo() < span.hi())) {
        out << "{\"verified\": false}\n";
        return kCheckFailed;
    }
    const Modulus mod = modulus_for(o, e, span);
    const bool ok = std::visit(
        [&](const auto& c) {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SignCertificate>) {
                return verify_sign_certificate(c, f, mod);
            }
            else {
                return verify_bound_certificate(c, f, mod);
            }
        },
        cert);
    out << "{\"verified\": " << (ok ? "true" : "false") << "}\n";
    return ok ? kOk : kCheckFailed;
}

void add_common(CLI::App* sub, Common& c, bool with_interval)
{
    if (with_interval) {
        sub->add_option("--interval", c.interval, "domain endpoints: lo hi")->expected(2)->required();
    }
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "human"}))
        ->capture_default_str();
    sub->add_option("--output,-o", c.output, "write the result to this file instead of stdout");
}

void add_trace(CLI::App* sub, Common& c)
{
    sub->add_option("--trace", c.trace, "write induction steps as JSON lines to this file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Gauge-fine partitions and certified root / extremum search"};
    app.require_subcommand(1);
    Options o;

    auto* partition = app.add_subcommand("partition", "build a gauge-fine tagged partition");
    add_common(partition, o.common, true);
    add_trace(partition, o.common);
    partition->add_option("--gauge", o.gauge, "const:<v> | pw:<b0:v0,b1:v1,...> | expr:<text>")->required();
    partition->add_option("--strategy", o.strategy, "construction strategy")
        ->check(CLI::IsMember({"greedy", "bisection", "hybrid"}))
        ->capture_default_str();
    partition->add_option("--max-cells", o.max_cells, "cell cap")->check(CLI::PositiveNumber)->capture_default_str();
    partition->add_option("--max-depth", o.max_depth, "bisection depth cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* check = app.add_subcommand("check", "check a partition file for validity and fineness");
    check->add_option("partition", o.file, "partition JSON file")->required();
    check->add_option("--gauge", o.gauge, "gauge spec")->required();

    auto* root = app.add_subcommand("root", "locate a solution of f(x) = y");
    add_common(root, o.common, true);
    add_trace(root, o.common);
    root->add_option("--f", o.f, "expression in x")->required();
    root->add_option("--y", o.y, "target value")->capture_default_str();
    root->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    root->add_option("--lipschitz", o.lipschitz, "Lipschitz constant (derived from f when absent)")
        ->check(CLI::PositiveNumber);

    auto* extremum = app.add_subcommand("extremum", "bracket the maximum or minimum of f");
    add_common(extremum, o.common, true);
    add_trace(extremum, o.common);
    extremum->add_option("--f", o.f, "expression in x")->required();
    extremum->add_option("--tol", o.tol, "bracket width")->check(CLI::PositiveNumber)->capture_default_str();
    extremum->add_option("--lipschitz", o.lipschitz, "Lipschitz constant")->check(CLI::PositiveNumber);
    auto* max_flag = extremum->add_flag("--max", o.want_max, "bracket sup f");
    auto* min_flag = extremum->add_flag("--min", o.want_min, "bracket inf f");
    max_flag->excludes(min_flag);

    auto* certify = app.add_subcommand("certify", "certify f != y or f < M on the interval");
    add_common(certify, o.common, true);
    add_trace(certify, o.common);
    certify->add_option("--f", o.f, "expression in x")->required();
    auto* nr = certify->add_option("--no-root", o.no_root, "certify f(x) != y");
    auto* bd = certify->add_option("--bound", o.bound, "certify f(x) < M");
    nr->excludes(bd);
    certify->add_option("--lipschitz", o.lipschitz, "Lipschitz constant")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "replay a certificate");
    verify->add_option("certificate", o.file, "certificate JSON file")->required();
    verify->add_option("--f", o.f, "expression in x")->required();
    verify->add_option("--lipschitz", o.lipschitz, "Lipschitz constant (derived from f when absent)")
        ->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        err << "gaugekit: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (partition->parsed()) {
            return cmd_partition(o, out);
        }
        if (check->parsed()) {
            return cmd_check(o, out);
        }
        if (root->parsed()) {
            return cmd_root(o, out);
        }
        if (extremum->parsed()) {
            return cmd_extremum(o, out);
        }
        if (certify->parsed()) {
            return cmd_certify(o, out);
        }
        return cmd_verify(o, out);
    }
    catch (const Exit& e) {
        err << "gaugekit: " << e.message << "\n";
        return e.code;
    }
    catch (const CapExceeded& e) {
        err << "gaugekit: " << e.what() << "\n";
        return kCapExceeded;
    }
    catch (const Error& e) {
        err << "gaugekit: " << e.what() << "\n";
        return kDataError;
    }
}

}  // namespace gaugekit::cli
