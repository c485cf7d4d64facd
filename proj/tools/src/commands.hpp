#pragma once

#include <iosfwd>

#include "config.hpp"

namespace gbdt::cli {

// Exit codes: 0 on success, 1 on validation/verification failure or a
// runtime abort (offending x reported), 2 on configuration errors.

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_potential(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_example(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatch with the output stream resolved from cfg.out_path.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& err);

}  // namespace gbdt::cli
