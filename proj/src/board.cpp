#include "t3dt/board.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace t3dt {

std::optional<Mark> parse_mark(std::string_view text) {
  if (text == "X" || text == "x") return Mark::X;
  if (text == "O" || text == "o") return Mark::O;
  return std::nullopt;
}

std::string_view to_string(CellClass c) noexcept {
  switch (c) {
    case CellClass::Corner: return "corner";
    case CellClass::Edge: return "edge";
    case CellClass::Centre: return "centre";
  }
  return "?";
}

Cell Cell::at(int row, int col) {
  if (row < 1 || row > 3 || col < 1 || col > 3) throw GameError("row/col must be in 1..3");
  return Cell((row - 1) * 3 + (col - 1));
}

std::string Cell::display() const {
  return "(" + std::to_string(row() + 1) + "," + std::to_string(col() + 1) + ")";
}

Cell CellSet::nth(int n) const {
  std::uint16_t rest = bits_;
  for (int i = 0; i < n; ++i) rest &= static_cast<std::uint16_t>(rest - 1);
  if (rest == 0) throw GameError("CellSet::nth out of range");
  return Cell(std::countr_zero(rest));
}

std::vector<int> CellSet::indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (Cell c : *this) out.push_back(c.index());
  return out;
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::XWin: return "XWin";
    case Outcome::OWin: return "OWin";
    case Outcome::Draw: return "Draw";
    case Outcome::Ongoing: return "Ongoing";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  for (auto o : {Outcome::XWin, Outcome::OWin, Outcome::Draw, Outcome::Ongoing})
    if (to_string(o) == text) return o;
  return std::nullopt;
}

Board Board::from_cells(CellSet x, CellSet o, Mark first_mover) {
  if (!(x & o).empty()) throw GameError("a cell holds both X and O");
  const int first = first_mover == Mark::X ? x.size() : o.size();
  const int second = first_mover == Mark::X ? o.size() : x.size();
  if (first - second != 0 && first - second != 1)
    throw GameError("mark counts violate alternation for the given first mover");

  const bool x_line = has_line(x.bits());
  const bool o_line = has_line(o.bits());
  if (x_line && o_line) throw GameError("both players have a completed line");
  // The winner must have made the last move.
  const Mark last = (first == second) ? opponent(first_mover) : first_mover;
  if ((x_line && last != Mark::X) || (o_line && last != Mark::O))
    throw GameError("play continued after a completed line");
  return Board(x.bits(), o.bits(), first_mover);
}

Board Board::from_text(std::string_view text, std::optional<Mark> first_mover) {
  if (text.size() != 9) throw GameError("board text must have exactly 9 characters");
  CellSet x, o;
  for (int i = 0; i < 9; ++i) {
    switch (text[i]) {
      case 'X': case 'x': x.insert(Cell(i)); break;
      case 'O': case 'o': o.insert(Cell(i)); break;
      case '.': break;
      default: throw GameError("board text may only contain X, O and '.'");
    }
  }
  Mark first = first_mover.value_or(o.size() > x.size() ? Mark::O : Mark::X);
  return from_cells(x, o, first);
}

std::optional<Mark> Board::at(Cell c) const noexcept {
  if (x_ & c.bit()) return Mark::X;
  if (o_ & c.bit()) return Mark::O;
  return std::nullopt;
}

Board Board::play(Cell c) const {
  if (!is_empty(c)) throw GameError("cell " + c.display() + " is occupied");
  if (is_terminal(*this)) throw GameError("game is already finished");
  Board next = *this;
  if (to_move() == Mark::X)
    next.x_ |= c.bit();
  else
    next.o_ |= c.bit();
  return next;
}

std::string Board::text() const {
  std::string s(9, '.');
  for (Cell c : cells_of(Mark::X)) s[c.index()] = 'X';
  for (Cell c : cells_of(Mark::O)) s[c.index()] = 'O';
  return s;
}

std::string Board::render() const {
  const std::string t = text();
  std::string out = "    1   2   3\n";
  for (int r = 0; r < 3; ++r) {
    out += std::to_string(r + 1) + "   ";
    for (int c = 0; c < 3; ++c) {
      out += t[r * 3 + c] == '.' ? ' ' : t[r * 3 + c];
      if (c < 2) out += " | ";
    }
    out += '\n';
    if (r < 2) out += "   ---+---+---\n";
  }
  return out;
}

CellClass classify(Cell c) noexcept {
  if (c.index() == 4) return CellClass::Centre;
  return (c.index() % 2 == 0) ? CellClass::Corner : CellClass::Edge;
}

Outcome outcome(const Board& b) noexcept {
  if (has_line(b.cells_of(Mark::X).bits())) return Outcome::XWin;
  if (has_line(b.cells_of(Mark::O).bits())) return Outcome::OWin;
  return b.empty_cells().empty() ? Outcome::Draw : Outcome::Ongoing;
}

CellSet winning_moves(const Board& b, Mark mark) noexcept {
  const std::uint16_t own = b.cells_of(mark).bits();
  const std::uint16_t free = b.empty_cells().bits();
  std::uint16_t out = 0;
  for (auto line : kLines) {
    const std::uint16_t gap = line & free;
    if (std::popcount(gap) == 1 && std::popcount(static_cast<std::uint16_t>(line & own)) == 2) out |= gap;
  }
  return CellSet(out);
}

CellSet fork_moves(const Board& b, Mark mark) noexcept {
  const std::uint16_t own = b.cells_of(mark).bits();
  const std::uint16_t free = b.empty_cells().bits();
  CellSet out;
  for (Cell c : b.empty_cells()) {
    const std::uint16_t mine = own | c.bit();
    const std::uint16_t rest = free & static_cast<std::uint16_t>(~c.bit());
    std::uint16_t threats = 0;
    for (auto line : kLines) {
      const std::uint16_t gap = line & rest;
      if (std::popcount(gap) == 1 && std::popcount(static_cast<std::uint16_t>(line & mine)) == 2) threats |= gap;
    }
    if (std::popcount(threats) >= 2) out.insert(c);
  }
  return out;
}

int chebyshev(Cell a, Cell b) noexcept {
  return std::max(std::abs(a.row() - b.row()), std::abs(a.col() - b.col()));
}

bool adjacent(Cell a, Cell b) noexcept { return chebyshev(a, b) == 1; }

namespace {

void require(Cell c, CellClass cls, const char* what) {
  if (classify(c) != cls) throw GameError(std::string(what) + ": expected a " + std::string(to_string(cls)));
}

}  // namespace

Cell diag_opposite(Cell corner) {
  require(corner, CellClass::Corner, "diag_opposite");
  return Cell(8 - corner.index());
}

CellSet corners_adjacent_to(Cell edge) {
  require(edge, CellClass::Edge, "corners_adjacent_to");
  CellSet out;
  for (Cell c : CellSet::corners())
    if (adjacent(c, edge)) out.insert(c);
  return out;
}

CellSet nearer_edges(Cell edge) {
  require(edge, CellClass::Edge, "nearer_edges");
  CellSet out;
  for (Cell e : CellSet::edges())
    if (adjacent(e, edge)) out.insert(e);
  return out;
}

Cell opposite_edge(Cell edge) {
  require(edge, CellClass::Edge, "opposite_edge");
  return Cell(8 - edge.index());
}

Cell shared_corner(Cell edge_a, Cell edge_b) {
  require(edge_a, CellClass::Edge, "shared_corner");
  require(edge_b, CellClass::Edge, "shared_corner");
  const CellSet both = corners_adjacent_to(edge_a) & corners_adjacent_to(edge_b);
  if (both.size() != 1) throw GameError("shared_corner: edges do not share a corner");
  return *both.begin();
}

CellSet min_distance_corners(CellSet anchors, CellSet candidates) {
  // Sums of square roots of small integers; compare with a tolerance.
  constexpr double kEps = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  CellSet out;
  for (Cell c : candidates) {
    double d = 0.0;
    for (Cell a : anchors) d += std::hypot(c.row() - a.row(), c.col() - a.col());
    if (d < best - kEps) {
      best = d;
      out = CellSet::of(c);
    } else if (d <= best + kEps) {
      out.insert(c);
    }
  }
  return out;
}

CellSet Symmetry::apply(CellSet s) const noexcept {
  CellSet out;
  for (Cell c : s) out.insert(apply(c));
  return out;
}

Board Symmetry::apply(const Board& b) const {
  return Board::from_cells(apply(b.cells_of(Mark::X)), apply(b.cells_of(Mark::O)), b.first_mover());
}

Symmetry Symmetry::inverse() const noexcept {
  std::array<std::uint8_t, 9> inv{};
  for (std::uint8_t i = 0; i < 9; ++i) inv[image_[i]] = i;
  return Symmetry(inv);
}

namespace {

constexpr std::array<std::uint8_t, 9> compose(const std::array<std::uint8_t, 9>& outer,
                                              const std::array<std::uint8_t, 9>& inner) {
  std::array<std::uint8_t, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) out[i] = outer[inner[i]];
  return out;
}

constexpr std::array<Symmetry, 8> make_d4() {
  // (r,c) -> (c, 2-r): clockwise quarter turn.
  constexpr std::array<std::uint8_t, 9> rot = {2, 5, 8, 1, 4, 7, 0, 3, 6};
  constexpr std::array<std::uint8_t, 9> transpose = {0, 3, 6, 1, 4, 7, 2, 5, 8};
  constexpr std::array<std::uint8_t, 9> id = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::array<std::array<std::uint8_t, 9>, 4> rots{id, rot, compose(rot, rot), compose(rot, compose(rot, rot))};
  return {Symmetry(rots[0]), Symmetry(rots[1]), Symmetry(rots[2]), Symmetry(rots[3]),
          Symmetry(compose(rots[0], transpose)), Symmetry(compose(rots[1], transpose)),
          Symmetry(compose(rots[2], transpose)), Symmetry(compose(rots[3], transpose))};
}

}  // namespace

const std::array<Symmetry, 8>& d4() noexcept {
  static constexpr std::array<Symmetry, 8> group = make_d4();
  return group;
}

std::array<Board, 8> d4_transforms(const Board& b) {
  const auto& g = d4();
  return {g[0].apply(b), g[1].apply(b), g[2].apply(b), g[3].apply(b),
          g[4].apply(b), g[5].apply(b), g[6].apply(b), g[7].apply(b)};
}

}  // namespace t3dt
