#pragma once

// Wire formats. Numbers are written as the shortest decimal that reads back
// to the same binary64 value, so every file replays bit-exactly.
//
//   partition:   {"domain": {"lo": a, "hi": b}, "cells": [{"lo": .., "hi": .., "tag": ..}, ...]}
//   certificate: {"kind": "sign"|"bound", "target": y_or_M, "side": "below"|"above",
//                 "pieces": [{"lo": .., "hi": .., "s": .., "fs": .., "delta": ..}, ...]}
//   trace:       one {"s": .., "t": ..} object per line

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaugekit/analysis.hpp"
#include "gaugekit/induction.hpp"
#include "gaugekit/partition.hpp"

namespace gaugekit::io {

std::string format_double(double v);

std::string partition_to_json(const TaggedPartition& p);
TaggedPartition partition_from_json(std::string_view text);

using Certificate = std::variant<SignCertificate, BoundCertificate>;

std::string certificate_to_json(const SignCertificate& cert);
std::string certificate_to_json(const BoundCertificate& cert);
Certificate certificate_from_json(std::string_view text);

std::string step_to_json(const induction::StepRecord& step);
std::string trace_to_jsonl(const std::vector<induction::StepRecord>& steps);

}  // namespace gaugekit::io
