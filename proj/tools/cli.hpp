#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gaugekit::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,      // check / verify rejected the input
    kPartitionStall = 2,   // no fine partition within the caps
    kNoSignChange = 3,
    kCapExceeded = 4,
    kCertifyFailed = 5,    // certification stalled or the claim is false
    kUsage = 64,
    kDataError = 65,       // unparsable expression, file or gauge spec
    kInternal = 70,        // an emitted artifact failed its own checker
};

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaugekit::cli
