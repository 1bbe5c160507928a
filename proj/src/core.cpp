#include <aqflow/core.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace aqflow
{

void cell_library::add( cell_kind kind )
{
  if ( index_.count( kind.name ) )
  {
    throw aqflow_error( "duplicate cell kind " + kind.name );
  }
  index_.emplace( kind.name, kinds_.size() );
  kinds_.push_back( std::move( kind ) );
}

cell_kind const* cell_library::find( std::string_view name ) const
{
  auto const it = index_.find( name );
  return it == index_.end() ? nullptr : &kinds_[it->second];
}

cell_kind const& cell_library::at( std::string_view name ) const
{
  if ( auto const* k = find( name ) )
  {
    return *k;
  }
  throw aqflow_error( "cell kind " + std::string( name ) + " not in library" );
}

int cell_library::max_splitter_fanout() const
{
  int k = 1;
  while ( find( "SPL" + std::to_string( k + 1 ) ) )
  {
    ++k;
  }
  return k >= 2 ? k : 0;
}

cell_library sample_library()
{
  cell_library lib;
  auto const one_in = []( std::string name, std::uint8_t fn ) {
    return cell_kind{ std::move( name ), 1, 1, 40, 30, 2, { { 20, 0 }, { 20, 30 } }, fn };
  };
  lib.add( one_in( "BUF", 0xaa ) );
  lib.add( one_in( "INV", 0x55 ) );
  lib.add( cell_kind{ "AND", 2, 1, 60, 50, 6, { { 10, 0 }, { 50, 0 }, { 30, 50 } }, 0x88 } );
  lib.add( cell_kind{ "OR", 2, 1, 60, 50, 6, { { 10, 0 }, { 50, 0 }, { 30, 50 } }, 0xee } );
  lib.add( cell_kind{ "MAJ3", 3, 1, 60, 70, 6, { { 10, 0 }, { 30, 0 }, { 50, 0 }, { 30, 70 } }, 0xe8 } );
  lib.add( cell_kind{ "CONST0", 0, 1, 40, 30, 2, { { 20, 30 } }, 0x00 } );
  lib.add( cell_kind{ "CONST1", 0, 1, 40, 30, 2, { { 20, 30 } }, 0xff } );
  lib.add( cell_kind{ "SPL2", 1, 2, 60, 30, 4, { { 30, 0 }, { 10, 30 }, { 50, 30 } }, std::nullopt } );
  lib.add( cell_kind{ "SPL3", 1, 3, 80, 30, 4, { { 40, 0 }, { 10, 30 }, { 40, 30 }, { 70, 30 } }, std::nullopt } );
  lib.add( cell_kind{ "SPL4", 1, 4, 100, 30, 4, { { 50, 0 }, { 10, 30 }, { 30, 30 }, { 70, 30 }, { 90, 30 } }, std::nullopt } );
  return lib;
}

/* gate types */

int gate_arity( gate_type type )
{
  switch ( type )
  {
  case gate_type::buf:
  case gate_type::inv:
  case gate_type::splitter:
    return 1;
  case gate_type::maj3:
    return 3;
  case gate_type::const0:
  case gate_type::const1:
    return 0;
  default:
    return 2;
  }
}

bool is_aoi_type( gate_type type )
{
  switch ( type )
  {
  case gate_type::maj3:
  case gate_type::const0:
  case gate_type::const1:
  case gate_type::splitter:
    return false;
  default:
    return true;
  }
}

std::string cell_name( gate_type type, std::size_t fanout )
{
  switch ( type )
  {
  case gate_type::buf: return "BUF";
  case gate_type::inv: return "INV";
  case gate_type::and2: return "AND";
  case gate_type::or2: return "OR";
  case gate_type::nand2: return "NAND";
  case gate_type::nor2: return "NOR";
  case gate_type::xor2: return "XOR";
  case gate_type::xnor2: return "XNOR";
  case gate_type::maj3: return "MAJ3";
  case gate_type::const0: return "CONST0";
  case gate_type::const1: return "CONST1";
  case gate_type::splitter: return "SPL" + std::to_string( fanout );
  }
  return "?";
}

std::string_view gate_keyword( gate_type type )
{
  switch ( type )
  {
  case gate_type::buf: return "BUF";
  case gate_type::inv: return "NOT";
  case gate_type::and2: return "AND";
  case gate_type::or2: return "OR";
  case gate_type::nand2: return "NAND";
  case gate_type::nor2: return "NOR";
  case gate_type::xor2: return "XOR";
  case gate_type::xnor2: return "XNOR";
  case gate_type::maj3: return "MAJ3";
  case gate_type::const0: return "CONST0";
  case gate_type::const1: return "CONST1";
  case gate_type::splitter: return "SPL";
  }
  return "?";
}

std::optional<gate_type> gate_type_from_keyword( std::string_view keyword )
{
  static constexpr std::pair<std::string_view, gate_type> table[] = {
      { "BUF", gate_type::buf }, { "NOT", gate_type::inv }, { "INV", gate_type::inv },
      { "AND", gate_type::and2 }, { "OR", gate_type::or2 }, { "NAND", gate_type::nand2 },
      { "NOR", gate_type::nor2 }, { "XOR", gate_type::xor2 }, { "XNOR", gate_type::xnor2 },
      { "MAJ3", gate_type::maj3 }, { "CONST0", gate_type::const0 }, { "CONST1", gate_type::const1 },
      { "SPL", gate_type::splitter } };
  for ( auto const& [k, t] : table )
  {
    if ( k == keyword )
    {
      return t;
    }
  }
  return std::nullopt;
}

std::uint64_t evaluate_gate( gate_type type, std::uint64_t a, std::uint64_t b, std::uint64_t c )
{
  switch ( type )
  {
  case gate_type::buf:
  case gate_type::splitter:
    return a;
  case gate_type::inv: return ~a;
  case gate_type::and2: return a & b;
  case gate_type::or2: return a | b;
  case gate_type::nand2: return ~( a & b );
  case gate_type::nor2: return ~( a | b );
  case gate_type::xor2: return a ^ b;
  case gate_type::xnor2: return ~( a ^ b );
  case gate_type::maj3: return ( a & b ) | ( a & c ) | ( b & c );
  case gate_type::const0: return 0u;
  case gate_type::const1: return ~std::uint64_t{ 0 };
  }
  return 0u;
}

/* netlist */

net_id netlist::add_net( std::string name )
{
  net n;
  n.id = static_cast<net_id>( nets.size() );
  n.name = name.empty() ? "n" + std::to_string( n.id ) : std::move( name );
  nets.push_back( std::move( n ) );
  return nets.back().id;
}

net_id netlist::add_input( std::string name )
{
  auto const n = add_net( name );
  nets[n].primary_input = true;
  inputs.push_back( { std::move( name ), n } );
  return n;
}

void netlist::add_output( std::string name, net_id n )
{
  nets.at( n ).primary_output = true;
  outputs.push_back( { std::move( name ), n } );
}

gate_id netlist::add_gate( gate_type type, std::vector<net_id> fanin, std::vector<net_id> fanout, int phase )
{
  gate g;
  g.id = static_cast<gate_id>( gates.size() );
  g.type = type;
  g.phase = phase;
  for ( std::uint32_t i = 0; i < fanin.size(); ++i )
  {
    nets.at( fanin[i] ).sinks.push_back( { g.id, i } );
  }
  for ( std::uint32_t i = 0; i < fanout.size(); ++i )
  {
    nets.at( fanout[i] ).driver = pin_ref{ g.id, i };
  }
  g.fanin = std::move( fanin );
  g.fanout = std::move( fanout );
  gates.push_back( std::move( g ) );
  return gates.back().id;
}

void netlist::rewire_input( gate_id g, std::uint32_t pin, net_id n )
{
  auto& gt = gates.at( g );
  auto& old_sinks = nets.at( gt.fanin.at( pin ) ).sinks;
  std::erase( old_sinks, pin_ref{ g, pin } );
  gt.fanin[pin] = n;
  nets.at( n ).sinks.push_back( { g, pin } );
}

int netlist::driver_phase( net_id n ) const
{
  auto const& d = nets.at( n ).driver;
  return d ? gates.at( d->gate ).phase : -1;
}

int netlist::depth() const
{
  int d = 0;
  for ( auto const& g : gates )
  {
    d = std::max( d, g.phase + 1 );
  }
  return d;
}

std::vector<gate_id> topological_order( netlist const& ntk )
{
  std::vector<std::uint32_t> pending( ntk.gates.size(), 0 );
  std::vector<gate_id> order;
  order.reserve( ntk.gates.size() );
  for ( auto const& g : ntk.gates )
  {
    for ( auto const f : g.fanin )
    {
      if ( f < ntk.nets.size() && ntk.nets[f].driver )
      {
        ++pending[g.id];
      }
    }
    if ( pending[g.id] == 0 )
    {
      order.push_back( g.id );
    }
  }
  for ( std::size_t i = 0; i < order.size(); ++i )
  {
    for ( auto const out : ntk.gates[order[i]].fanout )
    {
      for ( auto const& s : ntk.nets[out].sinks )
      {
        if ( --pending[s.gate] == 0 )
        {
          order.push_back( s.gate );
        }
      }
    }
  }
  if ( order.size() != ntk.gates.size() )
  {
    throw aqflow_error( "netlist contains a combinational cycle" );
  }
  return order;
}

std::vector<std::vector<std::uint64_t>> simulate( netlist const& ntk, std::vector<std::vector<std::uint64_t>> const& pi_words )
{
  if ( pi_words.size() != ntk.inputs.size() )
  {
    throw aqflow_error( "simulate: pattern count does not match primary inputs" );
  }
  std::size_t const words = pi_words.empty() ? 1u : pi_words.front().size();
  std::vector<std::vector<std::uint64_t>> value( ntk.nets.size() );
  for ( std::size_t i = 0; i < ntk.inputs.size(); ++i )
  {
    value[ntk.inputs[i].net] = pi_words[i];
  }
  for ( auto const id : topological_order( ntk ) )
  {
    auto const& g = ntk.gates[id];
    std::vector<std::uint64_t> out( words );
    auto const in = [&]( std::size_t k, std::size_t w ) -> std::uint64_t {
      if ( k >= g.fanin.size() )
      {
        return 0u;
      }
      auto const& v = value[g.fanin[k]];
      return v.empty() ? 0u : v[w];
    };
    for ( std::size_t w = 0; w < words; ++w )
    {
      out[w] = evaluate_gate( g.type, in( 0, w ), in( 1, w ), in( 2, w ) );
    }
    for ( auto const o : g.fanout )
    {
      value[o] = out;
    }
  }
  std::vector<std::vector<std::uint64_t>> result;
  result.reserve( ntk.outputs.size() );
  for ( auto const& po : ntk.outputs )
  {
    auto v = value[po.net];
    v.resize( words, 0u );
    result.push_back( std::move( v ) );
  }
  return result;
}

std::vector<std::vector<std::uint64_t>> simulate_exhaustive( netlist const& ntk )
{
  auto const n = ntk.inputs.size();
  if ( n > 20 )
  {
    throw aqflow_error( "simulate_exhaustive: too many primary inputs" );
  }
  std::size_t const vectors = std::size_t{ 1 } << n;
  std::size_t const words = std::max<std::size_t>( 1u, vectors / 64u );
  std::vector<std::vector<std::uint64_t>> patterns( n, std::vector<std::uint64_t>( words, 0u ) );
  for ( std::size_t v = 0; v < vectors; ++v )
  {
    for ( std::size_t i = 0; i < n; ++i )
    {
      if ( ( v >> i ) & 1u )
      {
        patterns[i][v / 64] |= std::uint64_t{ 1 } << ( v % 64 );
      }
    }
  }
  auto out = simulate( ntk, patterns );
  if ( vectors < 64 )
  {
    auto const mask = ( std::uint64_t{ 1 } << vectors ) - 1u;
    for ( auto& o : out )
    {
      o[0] &= mask;
    }
  }
  return out;
}

/* validation */

std::string_view to_string( violation_kind kind )
{
  switch ( kind )
  {
  case violation_kind::cycle: return "Cycle";
  case violation_kind::missing_net: return "MissingNet";
  case violation_kind::arity_mismatch: return "ArityMismatch";
  case violation_kind::undriven_net: return "UndrivenNet";
  case violation_kind::dangling_net: return "DanglingNet";
  case violation_kind::fanout: return "FanoutViolation";
  case violation_kind::unbalanced_fanin: return "UnbalancedFanin";
  case violation_kind::unaligned_output: return "UnalignedOutput";
  }
  return "?";
}

std::vector<violation> validate_netlist( netlist const& ntk, validate_params const& ps )
{
  std::vector<violation> result;
  auto const report = [&]( violation_kind k, gate_id g, net_id n, std::string msg ) {
    result.push_back( { k, g, n, std::move( msg ) } );
  };

  bool structurally_sound = true;
  for ( auto const& g : ntk.gates )
  {
    int const expected = gate_arity( g.type );
    if ( static_cast<int>( g.fanin.size() ) != expected )
    {
      report( violation_kind::arity_mismatch, g.id, invalid_id, "gate g" + std::to_string( g.id ) + " has wrong fanin count" );
    }
    if ( g.type == gate_type::splitter ? g.fanout.size() < 2 : g.fanout.size() != 1 )
    {
      report( violation_kind::arity_mismatch, g.id, invalid_id, "gate g" + std::to_string( g.id ) + " has wrong output count" );
    }
    for ( auto const n : g.fanin )
    {
      if ( n >= ntk.nets.size() )
      {
        structurally_sound = false;
        report( violation_kind::missing_net, g.id, n, "gate g" + std::to_string( g.id ) + " references a missing net" );
      }
    }
    for ( auto const n : g.fanout )
    {
      if ( n >= ntk.nets.size() )
      {
        structurally_sound = false;
        report( violation_kind::missing_net, g.id, n, "gate g" + std::to_string( g.id ) + " references a missing net" );
      }
    }
  }
  if ( !structurally_sound )
  {
    return result;
  }

  for ( auto const& n : ntk.nets )
  {
    if ( !n.driver && !n.primary_input )
    {
      report( violation_kind::undriven_net, invalid_id, n.id, "net " + n.name + " has no driver" );
    }
    if ( n.driver && n.fanout() == 0 )
    {
      report( violation_kind::dangling_net, n.driver ? n.driver->gate : invalid_id, n.id, "net " + n.name + " has no sink" );
    }
    if ( ps.single_fanout && n.fanout() > 1 )
    {
      report( violation_kind::fanout, n.driver ? n.driver->gate : invalid_id, n.id,
              "net " + n.name + " drives " + std::to_string( n.fanout() ) + " sinks" );
    }
  }

  try
  {
    (void)topological_order( ntk );
  }
  catch ( aqflow_error const& )
  {
    report( violation_kind::cycle, invalid_id, invalid_id, "netlist contains a combinational cycle" );
    return result;
  }

  if ( ps.balanced )
  {
    for ( auto const& g : ntk.gates )
    {
      for ( auto const n : g.fanin )
      {
        if ( ntk.driver_phase( n ) != g.phase - 1 )
        {
          report( violation_kind::unbalanced_fanin, g.id, n,
                  "gate g" + std::to_string( g.id ) + " at phase " + std::to_string( g.phase ) + " has a fanin at phase " +
                      std::to_string( ntk.driver_phase( n ) ) );
          break;
        }
      }
    }
    int const depth = ntk.depth();
    for ( auto const& po : ntk.outputs )
    {
      if ( ntk.driver_phase( po.net ) != depth - 1 )
      {
        report( violation_kind::unaligned_output, invalid_id, po.net, "output " + po.name + " is not aligned to the last phase" );
      }
    }
  }
  return result;
}

netlist_stats jj_and_net_stats( netlist const& ntk, cell_library const& lib )
{
  netlist_stats s;
  for ( auto const& g : ntk.gates )
  {
    s.jj_count += static_cast<std::uint64_t>( lib.at( g.cell() ).jj_count );
  }
  s.net_count = ntk.nets.size();
  s.depth = ntk.depth();
  return s;
}

/* configuration */

void flow_config::validate() const
{
  auto const fail = []( std::string const& msg ) { throw config_error( msg ); };
  if ( s_min <= 0 )
    fail( "s_min must be positive" );
  if ( w_max <= s_min )
    fail( "w_max must exceed s_min" );
  if ( alpha < 1.0 )
    fail( "alpha must be at least 1" );
  if ( grid_step <= 0 || s_min % grid_step != 0 )
    fail( "grid_step must divide s_min" );
  if ( lambda_t < 0.0 || lambda_w < 0.0 )
    fail( "lambda weights must be non-negative" );
  if ( gamma < 0.0 )
    fail( "gamma must be non-negative" );
  if ( target_clock_ghz <= 0.0 )
    fail( "target clock must be positive" );
  if ( max_expansions < 0 || window_size < 1 || window_size > 6 )
    fail( "max_expansions must be >= 0 and window_size in 1..6" );
  if ( channel_gap < s_min || channel_gap % grid_step != 0 )
    fail( "channel_gap must be a grid multiple of at least s_min" );
  if ( wire_margin < 0.0 || wire_margin >= 1.0 )
    fail( "wire_margin must lie in [0, 1)" );
}

micron snap_to_grid( double x, micron grid )
{
  return static_cast<micron>( std::llround( x / static_cast<double>( grid ) ) ) * grid;
}

micron round_up_to_grid( micron x, micron grid )
{
  return ( ( x + grid - 1 ) / grid ) * grid;
}


std::uint64_t bounded_draw( std::mt19937_64& rng, std::uint64_t n )
{
  if ( n <= 1 )
  {
    return 0;
  }
  auto const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do
  {
    v = rng();
  } while ( v >= limit );
  return v % n;
}

} // namespace aqflow
