/*!
  \file core.hpp
  \brief Netlist, cell library and configuration types shared by every stage.

  Gates carry an absolute phase (row index). The clock phase of a gate is
  `phase mod 4`. Primary inputs behave as virtual drivers at phase -1, and
  primary outputs are consumed by virtual pads at phase `depth`.
*/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aqflow
{

using micron = std::int64_t;
using gate_id = std::uint32_t;
using net_id = std::uint32_t;

inline constexpr std::uint32_t invalid_id = 0xffffffffu;

/* errors */

class aqflow_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Input error with a 1-based source location. */
class parse_error : public aqflow_error
{
public:
  parse_error( std::string const& what, int line, int column )
      : aqflow_error( "line " + std::to_string( line ) + ", column " + std::to_string( column ) + ": " + what ),
        line( line ), column( column )
  {
  }

  int line;
  int column;
};

class config_error : public aqflow_error
{
public:
  using aqflow_error::aqflow_error;
};

/* cell library */

struct pin_offset
{
  micron dx{ 0 };
  micron dy{ 0 };

  friend bool operator==( pin_offset const&, pin_offset const& ) = default;
};

struct cell_kind
{
  std::string name;
  int inputs{ 0 };
  int outputs{ 1 };
  micron width{ 0 };
  micron height{ 0 };
  int jj_count{ 0 };
  /*! input pins first, then output pins */
  std::vector<pin_offset> pins;
  /*! truth table over the inputs (bit index = c b a); empty for splitters */
  std::optional<std::uint8_t> function;

  bool is_splitter() const { return !function.has_value(); }
  pin_offset input_pin( int i ) const { return pins.at( i ); }
  pin_offset output_pin( int i ) const { return pins.at( inputs + i ); }

  friend bool operator==( cell_kind const&, cell_kind const& ) = default;
};

class cell_library
{
public:
  /*! \brief Adds a kind; throws on duplicate names. */
  void add( cell_kind kind );

  cell_kind const* find( std::string_view name ) const;
  cell_kind const& at( std::string_view name ) const;

  /*! \brief Largest k such that SPL2..SPLk are all present (0 if none). */
  int max_splitter_fanout() const;

  std::vector<cell_kind> const& kinds() const { return kinds_; }

private:
  std::vector<cell_kind> kinds_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/*! \brief Sample AQFP library: 10 um pitch geometry, 40x30 buffers, 60x70 MAJ3. */
cell_library sample_library();

/* netlist */

enum class gate_type : std::uint8_t
{
  buf,
  inv,
  and2,
  or2,
  nand2,
  nor2,
  xor2,
  xnor2,
  maj3,
  const0,
  const1,
  splitter
};

int gate_arity( gate_type type );
bool is_aoi_type( gate_type type );
/*! \brief Library cell name for a gate type; splitters need their fanout. */
std::string cell_name( gate_type type, std::size_t fanout = 1 );
/*! \brief Keyword used in netlist text (NOT for inverters). */
std::string_view gate_keyword( gate_type type );
std::optional<gate_type> gate_type_from_keyword( std::string_view keyword );

/*! \brief Evaluates a gate on bit-parallel words. */
std::uint64_t evaluate_gate( gate_type type, std::uint64_t a, std::uint64_t b, std::uint64_t c );

struct pin_ref
{
  gate_id gate{ invalid_id };
  std::uint32_t pin{ 0 };

  friend bool operator==( pin_ref const&, pin_ref const& ) = default;
};

struct gate
{
  gate_id id{ invalid_id };
  gate_type type{ gate_type::buf };
  std::vector<net_id> fanin;
  std::vector<net_id> fanout;
  int phase{ 0 };

  std::string cell() const { return cell_name( type, fanout.size() ); }
};

struct net
{
  net_id id{ invalid_id };
  std::string name;
  /*! unset for primary inputs */
  std::optional<pin_ref> driver;
  std::vector<pin_ref> sinks;
  bool primary_input{ false };
  bool primary_output{ false };

  std::size_t fanout() const { return sinks.size() + ( primary_output ? 1u : 0u ); }
};

struct io_port
{
  std::string name;
  net_id net{ invalid_id };

  friend bool operator==( io_port const&, io_port const& ) = default;
};

class netlist
{
public:
  std::string model{ "top" };
  std::vector<gate> gates;
  std::vector<net> nets;
  std::vector<io_port> inputs;
  std::vector<io_port> outputs;

  net_id add_net( std::string name = {} );
  net_id add_input( std::string name );
  void add_output( std::string name, net_id n );

  /*! \brief Adds a gate and wires its pins into the referenced nets. */
  gate_id add_gate( gate_type type, std::vector<net_id> fanin, std::vector<net_id> fanout, int phase = 0 );

  /*! \brief Points input `pin` of gate `g` at net `n`, keeping sink lists consistent. */
  void rewire_input( gate_id g, std::uint32_t pin, net_id n );

  /*! \brief Phase of the net's driver; -1 for primary inputs. */
  int driver_phase( net_id n ) const;

  /*! \brief max phase + 1 (0 for a gate-free netlist). */
  int depth() const;
};

/*! \brief Gates in topological order; throws aqflow_error on a cycle. */
std::vector<gate_id> topological_order( netlist const& ntk );

/*! \brief Bit-parallel simulation. `pi_words[i]` holds the patterns of input i. */
std::vector<std::vector<std::uint64_t>> simulate( netlist const& ntk, std::vector<std::vector<std::uint64_t>> const& pi_words );

/*! \brief Simulates all 2^n input vectors (n <= 20). Output i, word w, bit b = vector 64w+b. */
std::vector<std::vector<std::uint64_t>> simulate_exhaustive( netlist const& ntk );

/* validation */

enum class violation_kind
{
  cycle,
  missing_net,
  arity_mismatch,
  undriven_net,
  dangling_net,
  fanout,
  unbalanced_fanin,
  unaligned_output
};

std::string_view to_string( violation_kind kind );

struct violation
{
  violation_kind kind;
  gate_id gate{ invalid_id };
  net_id net{ invalid_id };
  std::string message;
};

struct validate_params
{
  /*! every non-splitter output drives exactly one consumer */
  bool single_fanout{ true };
  /*! every fanin driver sits at phase - 1 and outputs are aligned */
  bool balanced{ true };
};

std::vector<violation> validate_netlist( netlist const& ntk, validate_params const& ps = {} );

struct netlist_stats
{
  std::uint64_t jj_count{ 0 };
  std::uint64_t net_count{ 0 };
  int depth{ 0 };

  friend bool operator==( netlist_stats const&, netlist_stats const& ) = default;
};

netlist_stats jj_and_net_stats( netlist const& ntk, cell_library const& lib );

/* configuration */

struct flow_config
{
  double lambda_t{ 0.002 };
  double lambda_w{ 10.0 };
  micron w_max{ 600 };
  micron s_min{ 10 };
  double alpha{ 2.0 };
  /*! WA smoothing; 0 selects 4 * grid_step */
  double gamma{ 0.0 };
  double target_clock_ghz{ 5.0 };
  micron grid_step{ 10 };
  int max_expansions{ 20 };
  std::uint64_t rng_seed{ 1 };

  double d_gate_ps{ 5.0 };
  double d_wire_ps_per_um{ 0.02 };
  /*! vertical space between adjacent rows before any expansion */
  micron channel_gap{ 20 };
  /*! via cost in um of wire; 0 selects 2 * grid_step */
  double via_cost{ 0.0 };
  int global_iterations{ 300 };
  int window_size{ 3 };
  int detailed_passes{ 4 };
  int max_buffer_row_iterations{ 6 };
  int repair_iterations{ 3 };
  micron die_margin{ 20 };
  /*! fraction of w_max held back for routing detours when planning buffer rows */
  double wire_margin{ 0.1 };

  /*! length limit used by placement-side planning */
  double planning_limit() const { return static_cast<double>( w_max ) * ( 1.0 - wire_margin ); }

  double effective_gamma() const { return gamma > 0.0 ? gamma : 4.0 * static_cast<double>( grid_step ); }
  double effective_via_cost() const { return via_cost > 0.0 ? via_cost : 2.0 * static_cast<double>( grid_step ); }
  /*! per-phase timing budget in ps */
  double phase_budget_ps() const { return 1000.0 / ( 4.0 * target_clock_ghz ); }

  /*! \brief Throws config_error when an invariant is broken. */
  void validate() const;
};

micron snap_to_grid( double x, micron grid );

/*! \brief Uniform draw in [0, n) by rejection; stable across standard libraries. */
std::uint64_t bounded_draw( std::mt19937_64& rng, std::uint64_t n );
micron round_up_to_grid( micron x, micron grid );

} // namespace aqflow
