/*!
  \file flow.hpp
  \brief End-to-end flow, single stages over a state directory, benchmark generation.

  A state directory holds the artifacts of every finished stage plus
  `state.json`, which records the stage reached, the input paths, and an
  FNV-1a hash of every artifact. A stage refuses to start when the
  artifact it reads no longer matches the recorded hash.
*/

#pragma once

#include <aqflow/io.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aqflow
{

enum exit_code : int
{
  exit_clean = 0,
  exit_drc_unclean = 1,
  exit_input_error = 2,
  exit_internal_error = 3
};

/*! \brief Bad or stale user input (maps to exit code 2). */
class input_error : public aqflow_error
{
public:
  using aqflow_error::aqflow_error;
};

/*! \brief Hard failure inside a stage (maps to exit code 3). */
class flow_error : public aqflow_error
{
public:
  flow_error( std::string stage, std::string const& what ) : aqflow_error( stage + ": " + what ), stage( std::move( stage ) ) {}

  std::string stage;
};

struct flow_options
{
  std::string netlist_path;
  /*! empty selects the built-in sample library */
  std::string library_path;
  std::string config_path;
  std::string out_dir{ "out" };
  std::optional<std::uint64_t> seed;
  /*! key = value pairs applied after the config file */
  std::vector<std::pair<std::string, std::string>> overrides;
  bool trace_objective{ false };
  bool dump_majtable{ false };
  bool verbose{ false };
  /*! one line per stage; null silences logging */
  std::ostream* log{ nullptr };
};

/*! \brief Stage names in flow order: synth, balance, place, route, drc. */
std::vector<std::string> const& stage_names();

/*! \brief Runs every stage; returns an exit code, never throws. */
int cmd_flow( flow_options const& opts );

/*!
  \brief Runs one stage against the state directory `opts.out_dir`.

  `synth` starts a fresh state from `opts.netlist_path`; the others read
  the previous stage's artifact.
*/
int cmd_stage( std::string const& stage, flow_options const& opts );

std::uint64_t fnv1a( std::string_view data );
std::string fnv1a_hex( std::string_view data );

struct bench_params
{
  int gates{ 100 };
  int inputs{ 8 };
  /*! minimum number of outputs; every sink-free gate becomes one */
  int outputs{ 4 };
  /*! logic depth; 0 picks about 2 * sqrt(gates) */
  int depth{ 0 };
  std::uint64_t seed{ 1 };
};

/*! \brief Random AOI DAG; throws input_error for infeasible parameters. */
netlist generate_benchmark( bench_params const& ps );

} // namespace aqflow
