#include "gaugekit/json_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "gaugekit/errors.hpp"

namespace gaugekit::io {
namespace {

using nlohmann::json;

json parse_document(std::string_view text)
{
    try {
        return json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

double number_field(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
        throw FormatError(std::string("missing numeric field \"") + key + "\"");
    }
    const double v = obj.at(key).get<double>();
    if (!std::isfinite(v)) {
        throw FormatError(std::string("field \"") + key + "\" is not finite");
    }
    return v;
}

const json& array_field(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_array()) {
        throw FormatError(std::string("missing array field \"") + key + "\"");
    }
    return obj.at(key);
}

Interval interval_of(double lo, double hi)
{
    try {
        return Interval(lo, hi);
    }
    catch (const InvalidInterval& e) {
        throw FormatError(e.what());
    }
}

std::string pieces_json(const std::vector<CertificatePiece>& pieces)
{
    std::string out = "[";
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        out += i == 0 ? "\n" : ",\n";
        out += "  {\"lo\": " + format_double(p.cell.lo()) + ", \"hi\": " + format_double(p.cell.hi()) +
               ", \"s\": " + format_double(p.sample) + ", \"fs\": " + format_double(p.value) +
               ", \"delta\": " + format_double(p.radius) + "}";
    }
    out += pieces.empty() ? "]" : "\n]";
    return out;
}

std::vector<CertificatePiece> pieces_from(const json& doc)
{
    std::vector<CertificatePiece> pieces;
    for (const auto& p : array_field(doc, "pieces")) {
        pieces.push_back({interval_of(number_field(p, "lo"), number_field(p, "hi")), number_field(p, "s"),
                          number_field(p, "fs"), number_field(p, "delta")});
    }
    return pieces;
}

}  // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string partition_to_json(const TaggedPartition& p)
{
    std::string out = "{\"domain\": {\"lo\": " + format_double(p.domain.lo()) +
                      ", \"hi\": " + format_double(p.domain.hi()) + "}, \"cells\": [";
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const auto& c = p.cells[i];
        out += i == 0 ? "\n" : ",\n";
        out += "  {\"lo\": " + format_double(c.cell.lo()) + ", \"hi\": " + format_double(c.cell.hi()) +
               ", \"tag\": " + format_double(c.tag) + "}";
    }
    out += p.cells.empty() ? "]}\n" : "\n]}\n";
    return out;
}

TaggedPartition partition_from_json(std::string_view text)
{
    const json doc = parse_document(text);
    if (!doc.is_object() || !doc.contains("domain")) {
        throw FormatError("missing object field \"domain\"");
    }
    const json& dom = doc.at("domain");
    TaggedPartition p{interval_of(number_field(dom, "lo"), number_field(dom, "hi")), {}};
    for (const auto& c : array_field(doc, "cells")) {
        p.cells.push_back({interval_of(number_field(c, "lo"), number_field(c, "hi")), number_field(c, "tag")});
    }
    return p;
}

std::string certificate_to_json(const SignCertificate& cert)
{
    return "{\"kind\": \"sign\", \"target\": " + format_double(cert.target) + ", \"side\": \"" +
           to_string(cert.side) + "\", \"pieces\": " + pieces_json(cert.pieces) + "}\n";
}

std::string certificate_to_json(const BoundCertificate& cert)
{
    return "{\"kind\": \"bound\", \"target\": " + format_double(cert.bound) +
           ", \"side\": \"below\", \"pieces\": " + pieces_json(cert.pieces) + "}\n";
}

Certificate certificate_from_json(std::string_view text)
{
    const json doc = parse_document(text);
    if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
        throw FormatError("missing string field \"kind\"");
    }
    const std::string kind = doc.at("kind").get<std::string>();
    const double target = number_field(doc, "target");
    std::string side = "below";
    if (doc.contains("side")) {
        if (!doc.at("side").is_string()) {
            throw FormatError("field \"side\" must be a string");
        }
        side = doc.at("side").get<std::string>();
    }
    if (side != "below" && side != "above") {
        throw FormatError("field \"side\" must be \"below\" or \"above\"");
    }
    if (kind == "sign") {
        return SignCertificate{target, side == "below" ? Side::Below : Side::Above, pieces_from(doc)};
    }
    if (kind == "bound") {
        if (side != "below") {
            throw FormatError("bound certificates are always \"below\"");
        }
        return BoundCertificate{target, pieces_from(doc)};
    }
    throw FormatError("unknown certificate kind \"" + kind + "\"");
}

std::string step_to_json(const induction::StepRecord& step)
{
    return "{\"s\": " + format_double(step.s) + ", \"t\": " + format_double(step.t) + "}";
}

std::string trace_to_jsonl(const std::vector<induction::StepRecord>& steps)
{
    std::string out;
    for (const auto& s : steps) {
        out += step_to_json(s);
        out += '\n';
    }
    return out;
}

}  // namespace gaugekit::io
