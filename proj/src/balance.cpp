#include <aqflow/balance.hpp>

#include <algorithm>
#include <random>
#include <tuple>

namespace aqflow
{

std::vector<int> splitter_tree_shape( std::size_t fanout, int k )
{
  std::vector<int> shape;
  if ( fanout < 2 || k < 2 )
  {
    return shape;
  }
  /* capacity of a subtree of depth d is k^d */
  auto const depth_for = [k]( std::size_t f ) {
    int d = 0;
    std::size_t cap = 1;
    while ( cap < f )
    {
      cap *= static_cast<std::size_t>( k );
      ++d;
    }
    return std::pair{ d, cap };
  };
  std::vector<std::size_t> pending{ fanout };
  while ( !pending.empty() )
  {
    auto const f = pending.front();
    pending.erase( pending.begin() );
    auto const [d, cap] = depth_for( f );
    auto const child_cap = cap / static_cast<std::size_t>( k );
    auto const children = ( f + child_cap - 1 ) / child_cap;
    shape.push_back( static_cast<int>( children ) );
    auto remaining = f;
    for ( std::size_t c = 0; c < children; ++c )
    {
      auto const part = std::min( child_cap, remaining );
      remaining -= part;
      if ( part >= 2 )
      {
        pending.push_back( part );
      }
    }
    (void)d;
  }
  return shape;
}

namespace
{

struct leaf
{
  bool is_output{ false };
  pin_ref sink;
};

/* builds the tree below `root` for `leaves`, depth bounded by `depth` */
void build_tree( netlist& ntk, net_id root, std::vector<leaf> const& leaves, int k, splitter_stats& st, std::vector<std::size_t>& output_index,
                 std::size_t po_slot, int& counter )
{
  if ( leaves.size() == 1 )
  {
    if ( leaves[0].is_output )
    {
      ntk.nets[root].primary_output = true;
      ntk.outputs[po_slot].net = root;
    }
    else
    {
      ntk.rewire_input( leaves[0].sink.gate, leaves[0].sink.pin, root );
    }
    return;
  }
  std::size_t cap = 1;
  while ( cap < leaves.size() )
  {
    cap *= static_cast<std::size_t>( k );
  }
  auto const child_cap = cap / static_cast<std::size_t>( k );
  auto const children = ( leaves.size() + child_cap - 1 ) / child_cap;

  std::vector<net_id> outs;
  auto const base = ntk.nets[root].name;
  for ( std::size_t c = 0; c < children; ++c )
  {
    outs.push_back( ntk.add_net( base + "_s" + std::to_string( counter++ ) ) );
  }
  ntk.add_gate( gate_type::splitter, { root }, outs );
  ++st.splitters;

  std::size_t next = 0;
  for ( std::size_t c = 0; c < children; ++c )
  {
    auto const part = std::min( child_cap, leaves.size() - next );
    std::vector<leaf> sub( leaves.begin() + static_cast<std::ptrdiff_t>( next ), leaves.begin() + static_cast<std::ptrdiff_t>( next + part ) );
    next += part;
    build_tree( ntk, outs[c], sub, k, st, output_index, po_slot, counter );
  }
}

} // namespace

netlist insert_splitters( netlist const& ntk, cell_library const& lib, splitter_stats* stats )
{
  int const k = lib.max_splitter_fanout();
  netlist out = ntk;
  splitter_stats st;
  std::vector<std::size_t> output_index;

  auto const original_nets = out.nets.size();
  for ( net_id n = 0; n < original_nets; ++n )
  {
    if ( out.nets[n].fanout() < 2 )
    {
      continue;
    }
    if ( k < 2 )
    {
      throw aqflow_error( "net " + out.nets[n].name + " needs a splitter but the library has none" );
    }
    std::vector<leaf> leaves;
    auto sinks = out.nets[n].sinks;
    std::sort( sinks.begin(), sinks.end(), []( auto const& a, auto const& b ) { return std::pair{ a.gate, a.pin } < std::pair{ b.gate, b.pin }; } );
    for ( auto const& s : sinks )
    {
      leaves.push_back( { false, s } );
    }
    std::size_t po_slot = 0;
    if ( out.nets[n].primary_output )
    {
      leaves.push_back( { true, {} } );
      for ( std::size_t i = 0; i < out.outputs.size(); ++i )
      {
        if ( out.outputs[i].net == n )
        {
          po_slot = i;
        }
      }
      out.nets[n].primary_output = false;
    }
    int depth = 0;
    for ( std::size_t cap = 1; cap < leaves.size(); cap *= static_cast<std::size_t>( k ) )
    {
      ++depth;
    }
    st.max_added_phases = std::max( st.max_added_phases, depth );
    ++st.trees;
    int counter = 0;
    build_tree( out, n, leaves, k, st, output_index, po_slot, counter );
  }
  if ( stats )
  {
    *stats = st;
  }
  return out;
}

std::vector<int> asap_phases( netlist const& ntk )
{
  std::vector<int> phase( ntk.gates.size(), 0 );
  for ( auto const g : topological_order( ntk ) )
  {
    int p = 0;
    for ( auto const n : ntk.gates[g].fanin )
    {
      auto const& d = ntk.nets[n].driver;
      p = std::max( p, d ? phase[d->gate] + 1 : 0 );
    }
    phase[g] = p;
  }
  return phase;
}

netlist insert_buffers( netlist const& ntk, buffer_params const& ps, buffer_stats* stats )
{
  for ( auto const& n : ntk.nets )
  {
    if ( n.fanout() > 1 )
    {
      throw aqflow_error( "insert_buffers: net " + n.name + " has more than one consumer" );
    }
  }
  netlist out = ntk;
  auto const phase = asap_phases( out );
  int depth = 0;
  for ( std::size_t g = 0; g < out.gates.size(); ++g )
  {
    out.gates[g].phase = phase[g];
    depth = std::max( depth, phase[g] + 1 );
  }

  /* an edge is (consumer gate, pin) or a primary output slot */
  struct edge
  {
    bool output;
    std::size_t index;
    std::uint32_t pin;
  };
  std::vector<edge> edges;
  for ( auto const& g : out.gates )
  {
    for ( std::uint32_t p = 0; p < g.fanin.size(); ++p )
    {
      edges.push_back( { false, g.id, p } );
    }
  }
  for ( std::size_t i = 0; i < out.outputs.size(); ++i )
  {
    edges.push_back( { true, i, 0 } );
  }
  if ( ps.shuffle_seed )
  {
    std::mt19937_64 rng( *ps.shuffle_seed );
    std::shuffle( edges.begin(), edges.end(), rng );
  }
  /* gaps depend only on phases, so chains are materialized in a canonical edge order */
  std::sort( edges.begin(), edges.end(),
             []( edge const& a, edge const& b ) { return std::tie( a.output, a.index, a.pin ) < std::tie( b.output, b.index, b.pin ); } );

  buffer_stats st;
  st.depth = depth;
  for ( auto const& e : edges )
  {
    net_id const n = e.output ? out.outputs[e.index].net : out.gates[e.index].fanin[e.pin];
    int const from = out.driver_phase( n );
    int const to = e.output ? depth : out.gates[e.index].phase;
    int const gap = to - from - 1;
    if ( gap <= 0 )
    {
      continue;
    }
    net_id cur = n;
    auto const base = out.nets[n].name;
    for ( int i = 0; i < gap; ++i )
    {
      auto const next = out.add_net( base + "_b" + std::to_string( i ) + ( e.output ? "o" : "g" + std::to_string( e.index ) + "p" + std::to_string( e.pin ) ) );
      out.add_gate( gate_type::buf, { cur }, { next }, from + 1 + i );
      cur = next;
    }
    st.buffers += static_cast<std::size_t>( gap );
    if ( e.output )
    {
      out.nets[n].primary_output = false;
      out.nets[cur].primary_output = true;
      out.outputs[e.index].net = cur;
    }
    else
    {
      /* the first buffer was appended as a sink of n; drop the original edge */
      out.rewire_input( static_cast<gate_id>( e.index ), e.pin, cur );
    }
  }
  if ( stats )
  {
    *stats = st;
  }
  return out;
}

} // namespace aqflow
