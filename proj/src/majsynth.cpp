#include <aqflow/majsynth.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace aqflow
{

namespace detail
{

/* symbolic signal during realization */
struct sym
{
  enum class kind : std::uint8_t
  {
    leaf,
    constant,
    node
  };
  kind k{ kind::constant };
  std::uint8_t index{ 0 };
  bool inverted{ false };
};

struct sym_node
{
  gate_type type;
  std::array<sym, 3> in;
  std::uint8_t function;
};

class realizer
{
public:
  explicit realizer( mapping_costs const& costs ) : costs_( costs ) {}

  std::uint8_t function_of( sym const& s ) const
  {
    std::uint8_t f = 0;
    switch ( s.k )
    {
    case sym::kind::leaf: f = leaf_tables[s.index]; break;
    case sym::kind::constant: f = 0x00; break;
    case sym::kind::node: f = nodes_[s.index].function; break;
    }
    return s.inverted ? static_cast<std::uint8_t>( ~f ) : f;
  }

  sym from_input( maj_input const& in, std::array<sym, 3> const& level1 ) const
  {
    sym s;
    switch ( in.source )
    {
    case maj_source::leaf0:
    case maj_source::leaf1:
    case maj_source::leaf2:
      s = { sym::kind::leaf, static_cast<std::uint8_t>( in.source ), false };
      break;
    case maj_source::const0: s = { sym::kind::constant, 0, false }; break;
    case maj_source::const1: s = { sym::kind::constant, 0, true }; break;
    default:
      s = level1[static_cast<std::size_t>( in.source ) - static_cast<std::size_t>( maj_source::level1_0 )];
      break;
    }
    if ( in.inverted )
    {
      s.inverted = !s.inverted;
    }
    return s;
  }

  /* semantic simplification of MAJ(a, b, c) */
  sym majority( sym a, sym b, sym c )
  {
    auto const fa = function_of( a ), fb = function_of( b ), fc = function_of( c );
    if ( fa == fb || fa == fc )
      return a;
    if ( fb == fc )
      return b;
    if ( fa == static_cast<std::uint8_t>( ~fb ) )
      return c;
    if ( fa == static_cast<std::uint8_t>( ~fc ) )
      return b;
    if ( fb == static_cast<std::uint8_t>( ~fc ) )
      return a;

    std::array<sym, 3> ops{ a, b, c };
    for ( std::size_t i = 0; i < 3; ++i )
    {
      if ( ops[i].k == sym::kind::constant )
      {
        auto const& x = ops[( i + 1 ) % 3];
        auto const& y = ops[( i + 2 ) % 3];
        auto const type = ops[i].inverted ? gate_type::or2 : gate_type::and2;
        auto const fx = function_of( x ), fy = function_of( y );
        auto const fn = static_cast<std::uint8_t>( type == gate_type::and2 ? ( fx & fy ) : ( fx | fy ) );
        return add_node( { type, { x, y, sym{} }, fn } );
      }
    }
    auto const fn = static_cast<std::uint8_t>( ( fa & fb ) | ( fa & fc ) | ( fb & fc ) );
    return add_node( { gate_type::maj3, { a, b, c }, fn } );
  }

  cell_program materialize( sym const& root )
  {
    cell_program p;
    memo_.assign( nodes_.size(), -1 );
    auto const out = emit( root, p );
    if ( out.is_leaf )
    {
      push( p, gate_type::buf, { out } );
    }
    finish( p );
    return p;
  }

  std::uint32_t jj_of( cell_program const& p ) const
  {
    std::uint32_t jj = 0;
    for ( auto const& c : p.cells )
    {
      switch ( c.type )
      {
      case gate_type::maj3: jj += costs_.maj; break;
      case gate_type::and2:
      case gate_type::or2: jj += costs_.and_or; break;
      case gate_type::inv: jj += costs_.inv; break;
      case gate_type::buf: jj += costs_.buf; break;
      default: jj += costs_.constant; break;
      }
    }
    return jj;
  }

private:
  sym add_node( sym_node n )
  {
    nodes_.push_back( n );
    return { sym::kind::node, static_cast<std::uint8_t>( nodes_.size() - 1 ), false };
  }

  static cell_operand push( cell_program& p, gate_type type, std::initializer_list<cell_operand> ops )
  {
    cell_op c;
    c.type = type;
    std::size_t i = 0;
    for ( auto const& o : ops )
    {
      c.in[i++] = o;
    }
    p.cells.push_back( c );
    return { false, static_cast<std::uint8_t>( p.cells.size() - 1 ) };
  }

  cell_operand emit( sym const& s, cell_program& p )
  {
    switch ( s.k )
    {
    case sym::kind::leaf:
    {
      cell_operand const leaf{ true, s.index };
      return s.inverted ? push( p, gate_type::inv, { leaf } ) : leaf;
    }
    case sym::kind::constant:
      return push( p, s.inverted ? gate_type::const1 : gate_type::const0, {} );
    case sym::kind::node:
    {
      if ( memo_[s.index] < 0 )
      {
        auto const& n = nodes_[s.index];
        int const arity = gate_arity( n.type );
        std::array<cell_operand, 3> ops{};
        for ( int i = 0; i < arity; ++i )
        {
          ops[i] = emit( n.in[i], p );
        }
        cell_op c;
        c.type = n.type;
        c.in = ops;
        p.cells.push_back( c );
        memo_[s.index] = static_cast<int>( p.cells.size() - 1 );
      }
      cell_operand const out{ false, static_cast<std::uint8_t>( memo_[s.index] ) };
      return s.inverted ? push( p, gate_type::inv, { out } ) : out;
    }
    }
    return {};
  }

  static void finish( cell_program& p )
  {
    std::vector<int> level( p.cells.size(), 0 );
    std::vector<std::array<int, 3>> from_leaf( p.cells.size(), { -1, -1, -1 } );
    for ( std::size_t i = 0; i < p.cells.size(); ++i )
    {
      auto const& c = p.cells[i];
      int lvl = 0;
      for ( int k = 0; k < gate_arity( c.type ); ++k )
      {
        auto const& o = c.in[k];
        if ( o.is_leaf )
        {
          from_leaf[i][o.index] = std::max( from_leaf[i][o.index], 1 );
        }
        else
        {
          lvl = std::max( lvl, level[o.index] );
          for ( int l = 0; l < 3; ++l )
          {
            if ( from_leaf[o.index][l] >= 0 )
            {
              from_leaf[i][l] = std::max( from_leaf[i][l], from_leaf[o.index][l] + 1 );
            }
          }
        }
      }
      level[i] = lvl + 1;
    }
    p.levels = p.cells.empty() ? 0 : level.back();
    p.leaf_depth = p.cells.empty() ? std::array<int, 3>{ -1, -1, -1 } : from_leaf.back();
  }

  mapping_costs costs_;
  std::vector<sym_node> nodes_;
  std::vector<int> memo_;
};

constexpr std::array<maj_input, 8> level1_choices{ {
    { maj_source::leaf0, false },
    { maj_source::leaf0, true },
    { maj_source::leaf1, false },
    { maj_source::leaf1, true },
    { maj_source::leaf2, false },
    { maj_source::leaf2, true },
    { maj_source::const0, false },
    { maj_source::const1, false },
} };

void offer( std::optional<maj_mapping>& slot, maj_mapping&& m )
{
  if ( !slot || m.cost < slot->cost )
  {
    slot = std::move( m );
  }
}

} // namespace detail

std::uint8_t evaluate_program( cell_program const& program )
{
  std::vector<std::uint64_t> value( program.cells.size() );
  auto const get = [&]( cell_operand const& o ) -> std::uint64_t {
    return o.is_leaf ? leaf_tables[o.index] : value[o.index];
  };
  for ( std::size_t i = 0; i < program.cells.size(); ++i )
  {
    auto const& c = program.cells[i];
    value[i] = evaluate_gate( c.type, get( c.in[0] ), get( c.in[1] ), get( c.in[2] ) );
  }
  return program.cells.empty() ? 0u : static_cast<std::uint8_t>( value.back() & 0xffu );
}

mapping_costs mapping_costs::from_library( cell_library const& lib )
{
  mapping_costs c;
  c.maj = lib.at( "MAJ3" ).jj_count;
  c.and_or = std::max( lib.at( "AND" ).jj_count, lib.at( "OR" ).jj_count );
  c.inv = lib.at( "INV" ).jj_count;
  c.buf = lib.at( "BUF" ).jj_count;
  c.constant = std::max( lib.at( "CONST0" ).jj_count, lib.at( "CONST1" ).jj_count );
  return c;
}

maj_mapping const* mapping_table::best( std::uint8_t function ) const
{
  auto const& one = one_level_[function];
  auto const& two = two_level_[function];
  if ( one && ( !two || !( two->cost < one->cost ) ) )
  {
    return &*one;
  }
  return two ? &*two : nullptr;
}

std::size_t mapping_table::size() const
{
  std::size_t n = 0;
  for ( std::size_t f = 0; f < 256; ++f )
  {
    n += ( one_level_[f] || two_level_[f] ) ? 1u : 0u;
  }
  return n;
}

maj_mapping realize_one_level( gate_config const& config, mapping_costs const& costs )
{
  detail::realizer r( costs );
  std::array<detail::sym, 3> const none{};
  auto const root = r.majority( r.from_input( config.inputs[0], none ), r.from_input( config.inputs[1], none ),
                                r.from_input( config.inputs[2], none ) );
  maj_mapping m;
  m.scheme = mapping_scheme::one_level;
  m.gates = { config };
  m.function = r.function_of( root );
  m.program = r.materialize( root );
  m.cost = { r.jj_of( m.program ), static_cast<std::uint32_t>( m.program.levels ) };
  return m;
}

mapping_table build_mapping_table( mapping_costs const& costs )
{
  mapping_table table;
  table.costs_ = costs;
  auto const& choices = detail::level1_choices;

  /* one level: multisets of three inputs, lexicographic */
  for ( std::size_t i = 0; i < choices.size(); ++i )
  {
    for ( std::size_t j = i; j < choices.size(); ++j )
    {
      for ( std::size_t k = j; k < choices.size(); ++k )
      {
        auto m = realize_one_level( gate_config{ std::array<maj_input, 3>{ choices[i], choices[j], choices[k] } }, costs );
        detail::offer( table.one_level_[m.function], std::move( m ) );
      }
    }
  }

  /* first-level representatives, ordered by their configuration encoding */
  std::vector<maj_mapping const*> reps;
  for ( auto const& m : table.one_level_ )
  {
    if ( m )
    {
      reps.push_back( &*m );
    }
  }
  auto const encode = []( gate_config const& g ) {
    std::uint32_t e = 0;
    for ( auto const& in : g.inputs )
    {
      e = e * 16u + static_cast<std::uint32_t>( in.source ) * 2u + ( in.inverted ? 1u : 0u );
    }
    return e;
  };
  std::sort( reps.begin(), reps.end(), [&]( auto const* a, auto const* b ) { return encode( a->gates[0] ) < encode( b->gates[0] ); } );

  /* two levels: three first-level gates feeding one root with optional inversions */
  for ( std::size_t i = 0; i < reps.size(); ++i )
  {
    for ( std::size_t j = i; j < reps.size(); ++j )
    {
      for ( std::size_t k = j; k < reps.size(); ++k )
      {
        std::array<gate_config, 3> const level1{ reps[i]->gates[0], reps[j]->gates[0], reps[k]->gates[0] };
        for ( unsigned mask = 0; mask < 8u; ++mask )
        {
          detail::realizer r( costs );
          std::array<detail::sym, 3> none{};
          std::array<detail::sym, 3> outs;
          for ( std::size_t g = 0; g < 3; ++g )
          {
            outs[g] = r.majority( r.from_input( level1[g].inputs[0], none ), r.from_input( level1[g].inputs[1], none ),
                                  r.from_input( level1[g].inputs[2], none ) );
          }
          gate_config root_cfg;
          root_cfg.inputs = { maj_input{ maj_source::level1_0, ( mask & 1u ) != 0 },
                              maj_input{ maj_source::level1_1, ( mask & 2u ) != 0 },
                              maj_input{ maj_source::level1_2, ( mask & 4u ) != 0 } };
          auto const root = r.majority( r.from_input( root_cfg.inputs[0], outs ), r.from_input( root_cfg.inputs[1], outs ),
                                        r.from_input( root_cfg.inputs[2], outs ) );
          auto const fn = r.function_of( root );
          auto program = r.materialize( root );
          mapping_cost const cost{ r.jj_of( program ), static_cast<std::uint32_t>( program.levels ) };
          auto& slot = table.two_level_[fn];
          if ( !slot || cost < slot->cost )
          {
            maj_mapping m;
            m.scheme = mapping_scheme::two_level;
            m.gates = { level1[0], level1[1], level1[2], root_cfg };
            m.function = fn;
            m.cost = cost;
            m.program = std::move( program );
            slot = std::move( m );
          }
        }
      }
    }
  }
  return table;
}

/* cuts */

namespace
{

std::uint8_t cone_function( netlist const& ntk, candidate_cut const& cut )
{
  std::map<net_id, std::uint64_t> value;
  for ( std::size_t i = 0; i < 3; ++i )
  {
    value[cut.leaves[i]] = leaf_tables[i];
  }
  /* cone gates listed root first; evaluate in reverse discovery order until stable */
  std::set<gate_id> const members( cut.cone.begin(), cut.cone.end() );
  std::vector<gate_id> order;
  std::set<gate_id> done;
  auto visit = [&]( auto&& self, gate_id g ) -> void {
    if ( done.count( g ) )
      return;
    done.insert( g );
    for ( auto const f : ntk.gates[g].fanin )
    {
      auto const& d = ntk.nets[f].driver;
      if ( !value.count( f ) && d && members.count( d->gate ) )
      {
        self( self, d->gate );
      }
    }
    order.push_back( g );
  };
  visit( visit, cut.root );
  for ( auto const g : order )
  {
    auto const& gt = ntk.gates[g];
    auto const in = [&]( std::size_t k ) { return k < gt.fanin.size() ? value.at( gt.fanin[k] ) : 0u; };
    value[gt.fanout[0]] = evaluate_gate( gt.type, in( 0 ), in( 1 ), in( 2 ) );
  }
  return static_cast<std::uint8_t>( value.at( ntk.gates[cut.root].fanout[0] ) & 0xffu );
}

bool in_fanin_cone( netlist const& ntk, net_id start, net_id target )
{
  std::vector<bool> seen( ntk.nets.size(), false );
  std::vector<net_id> stack{ start };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( n == target )
      return true;
    if ( seen[n] )
      continue;
    seen[n] = true;
    if ( auto const& d = ntk.nets[n].driver )
    {
      for ( auto const f : ntk.gates[d->gate].fanin )
      {
        stack.push_back( f );
      }
    }
  }
  return false;
}

constexpr std::size_t max_frontier = 8;
constexpr std::size_t max_cone = 32;

} // namespace

std::optional<candidate_cut> find_cut( netlist const& ntk, gate_id root, std::vector<bool> const& locked )
{
  auto const& r = ntk.gates.at( root );
  if ( r.fanout.size() != 1 || r.type == gate_type::splitter )
  {
    return std::nullopt;
  }
  std::set<gate_id> cone{ root };
  std::set<net_id> leaves( r.fanin.begin(), r.fanin.end() );

  auto const expandable = [&]( net_id n ) -> std::optional<gate_id> {
    auto const& nt = ntk.nets[n];
    if ( !nt.driver || nt.primary_output )
      return std::nullopt;
    auto const d = nt.driver->gate;
    auto const& dg = ntk.gates[d];
    if ( dg.fanout.size() != 1 || dg.fanin.empty() || dg.type == gate_type::splitter )
      return std::nullopt;
    if ( !locked.empty() && locked[d] )
      return std::nullopt;
    for ( auto const& s : nt.sinks )
    {
      if ( !cone.count( s.gate ) )
        return std::nullopt;
    }
    return d;
  };

  bool changed = true;
  while ( changed )
  {
    changed = false;
    for ( auto const n : leaves )
    {
      if ( auto const d = expandable( n ) )
      {
        cone.insert( *d );
        leaves.erase( n );
        for ( auto const f : ntk.gates[*d].fanin )
        {
          leaves.insert( f );
        }
        changed = true;
        break;
      }
    }
    if ( leaves.size() > max_frontier || cone.size() > max_cone )
    {
      return std::nullopt;
    }
  }
  if ( leaves.size() != 3 )
  {
    return std::nullopt;
  }

  candidate_cut cut;
  cut.root = root;
  std::copy( leaves.begin(), leaves.end(), cut.leaves.begin() );
  for ( std::size_t i = 0; i < 3; ++i )
  {
    for ( std::size_t j = 0; j < 3; ++j )
    {
      if ( i != j && in_fanin_cone( ntk, cut.leaves[i], cut.leaves[j] ) )
      {
        return std::nullopt;
      }
    }
  }
  cut.cone.push_back( root );
  for ( auto const g : cone )
  {
    if ( g != root )
      cut.cone.push_back( g );
  }
  cut.function = cone_function( ntk, cut );
  return cut;
}

std::vector<candidate_cut> enumerate_cuts( netlist const& ntk )
{
  auto const order = topological_order( ntk );
  std::vector<candidate_cut> cuts;
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    if ( auto c = find_cut( ntk, *it ) )
    {
      cuts.push_back( std::move( *c ) );
    }
  }
  return cuts;
}

std::vector<maj_mapping> match_majority( candidate_cut const& cut, mapping_table const& table )
{
  std::vector<maj_mapping> result;
  if ( auto const& m = table.one_level( cut.function ) )
    result.push_back( *m );
  if ( auto const& m = table.two_level( cut.function ) )
    result.push_back( *m );
  std::stable_sort( result.begin(), result.end(), []( auto const& a, auto const& b ) { return a.cost < b.cost; } );
  return result;
}

/* conversion */

namespace
{

struct unit
{
  bool active{ true };
  std::array<net_id, 3> leaves{ invalid_id, invalid_id, invalid_id };
  cell_program program;
  std::uint32_t jj{ 0 };
};

unit trivial_unit( netlist const& ntk, gate const& g, mapping_table const& table )
{
  unit u;
  for ( std::size_t i = 0; i < g.fanin.size() && i < 3; ++i )
  {
    u.leaves[i] = g.fanin[i];
  }
  if ( g.type == gate_type::buf )
  {
    cell_op c;
    c.type = gate_type::buf;
    c.in[0] = { true, 0 };
    u.program.cells = { c };
    u.program.leaf_depth = { 1, -1, -1 };
    u.program.levels = 1;
    u.jj = static_cast<std::uint32_t>( table.costs().buf );
    return u;
  }
  auto const fn = static_cast<std::uint8_t>( evaluate_gate( g.type, leaf_tables[0], leaf_tables[1], leaf_tables[2] ) & 0xffu );
  auto const* m = table.best( fn );
  if ( !m )
  {
    throw aqflow_error( "no majority realization for gate g" + std::to_string( g.id ) );
  }
  u.program = m->program;
  u.jj = m->cost.jj_count;
  (void)ntk;
  return u;
}

struct cover_cost
{
  std::uint64_t jj{ 0 };
  int depth{ 0 };

  bool operator<=( cover_cost const& o ) const { return jj < o.jj || ( jj == o.jj && depth <= o.depth ); }
};

cover_cost evaluate_cover( netlist const& ntk, std::vector<gate_id> const& order, std::vector<unit> const& units )
{
  cover_cost c;
  std::vector<int> arrival( ntk.nets.size(), 0 );
  for ( auto const g : order )
  {
    auto const& u = units[g];
    if ( !u.active )
      continue;
    c.jj += u.jj;
    int a = 0;
    bool any = false;
    for ( std::size_t i = 0; i < 3; ++i )
    {
      if ( u.program.leaf_depth[i] >= 0 )
      {
        a = std::max( a, arrival[u.leaves[i]] + u.program.leaf_depth[i] );
        any = true;
      }
    }
    if ( !any )
      a = u.program.levels;
    arrival[ntk.gates[g].fanout[0]] = a;
  }
  for ( auto const& po : ntk.outputs )
  {
    c.depth = std::max( c.depth, arrival[po.net] );
  }
  return c;
}

} // namespace

netlist convert_to_majority( netlist const& ntk, mapping_table const& table, convert_stats* stats )
{
  for ( auto const& g : ntk.gates )
  {
    if ( g.fanout.size() != 1 || g.fanin.size() > 3 || g.type == gate_type::splitter )
    {
      throw aqflow_error( "convert_to_majority expects single-output gates" );
    }
  }
  auto const order = topological_order( ntk );
  std::vector<unit> units;
  units.reserve( ntk.gates.size() );
  for ( auto const& g : ntk.gates )
  {
    units.push_back( trivial_unit( ntk, g, table ) );
  }

  convert_stats st;
  auto current = evaluate_cover( ntk, order, units );
  st.initial_jj = current.jj;
  st.initial_depth = current.depth;

  std::vector<bool> locked( ntk.gates.size(), false );
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    auto const root = *it;
    if ( locked[root] )
      continue;
    auto const cut = find_cut( ntk, root, locked );
    if ( !cut )
      continue;
    ++st.cuts;
    auto const matches = match_majority( *cut, table );
    if ( matches.empty() )
      continue;

    auto saved = units[root];
    units[root].leaves = cut->leaves;
    units[root].program = matches.front().program;
    units[root].jj = matches.front().cost.jj_count;
    for ( std::size_t i = 1; i < cut->cone.size(); ++i )
    {
      units[cut->cone[i]].active = false;
    }
    auto const trial = evaluate_cover( ntk, order, units );
    if ( trial <= current )
    {
      current = trial;
      ++st.accepted;
      for ( std::size_t i = 1; i < cut->cone.size(); ++i )
      {
        locked[cut->cone[i]] = true;
      }
    }
    else
    {
      units[root] = std::move( saved );
      for ( std::size_t i = 1; i < cut->cone.size(); ++i )
      {
        units[cut->cone[i]].active = true;
      }
    }
  }

  /* emit */
  netlist out;
  out.model = ntk.model;
  std::vector<net_id> map( ntk.nets.size(), invalid_id );
  for ( auto const& pi : ntk.inputs )
  {
    map[pi.net] = out.add_input( pi.name );
  }
  auto const level_of = [&]( net_id n ) { return out.nets[n].driver ? out.gates[out.nets[n].driver->gate].phase : -1; };
  for ( auto const g : order )
  {
    auto const& u = units[g];
    if ( !u.active )
      continue;
    std::vector<net_id> cell_out( u.program.cells.size(), invalid_id );
    for ( std::size_t c = 0; c < u.program.cells.size(); ++c )
    {
      auto const& op = u.program.cells[c];
      std::vector<net_id> fanin;
      int ph = 0;
      for ( int k = 0; k < gate_arity( op.type ); ++k )
      {
        auto const n = op.in[k].is_leaf ? map.at( u.leaves[op.in[k].index] ) : cell_out[op.in[k].index];
        fanin.push_back( n );
        ph = std::max( ph, level_of( n ) + 1 );
      }
      bool const last = c + 1 == u.program.cells.size();
      auto const o = out.add_net( last ? ntk.nets[ntk.gates[g].fanout[0]].name : std::string{} );
      out.add_gate( op.type, std::move( fanin ), { o }, ph );
      cell_out[c] = o;
    }
    map[ntk.gates[g].fanout[0]] = cell_out.back();
  }
  for ( auto const& po : ntk.outputs )
  {
    out.add_output( po.name, map.at( po.net ) );
  }

  st.final_jj = current.jj;
  st.final_depth = current.depth;
  if ( stats )
  {
    *stats = st;
  }
  return out;
}

} // namespace aqflow
