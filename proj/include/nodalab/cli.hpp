#pragma once

#include "nodalab/config.hpp"
#include "nodalab/report.hpp"

namespace nodalab {

// Study commands.  Each realizes the configured field, runs its checkers,
// writes CSV / JSON / plot artifacts under cfg.outdir, and returns the
// report; the CLI exit status is 0 iff no record failed.
StudyReport cmd_solve(const RunConfig& cfg);
StudyReport cmd_frequency(const RunConfig& cfg);
StudyReport cmd_doubling(const RunConfig& cfg);
StudyReport cmd_nodal(const RunConfig& cfg);
StudyReport cmd_divide(const RunConfig& cfg);
StudyReport cmd_sweep(const RunConfig& cfg);
ConsolidatedReport cmd_report(const std::string& dir);

// Full argument surface: subcommands solve | frequency | doubling | nodal |
// divide | sweep | report, a JSON config file, and flag overrides.
int run_cli(int argc, char** argv);

}  // namespace nodalab
