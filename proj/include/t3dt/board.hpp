#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace t3dt {

/// Raised for boards, cells or arguments that violate the game's invariants.
class GameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mark : std::uint8_t { X, O };

constexpr Mark opponent(Mark m) noexcept { return m == Mark::X ? Mark::O : Mark::X; }
constexpr char to_char(Mark m) noexcept { return m == Mark::X ? 'X' : 'O'; }
std::optional<Mark> parse_mark(std::string_view text);

enum class CellClass : std::uint8_t { Corner, Edge, Centre };

std::string_view to_string(CellClass c) noexcept;

/// One of the nine squares, row-major. Row/column accessors are 0-based;
/// the 1-based (row,col) form only appears in display code.
class Cell {
 public:
  constexpr explicit Cell(int index) : index_(checked(index)) {}

  /// 1-based (row, col), as printed in figures and prompts.
  static Cell at(int row, int col);

  constexpr int index() const noexcept { return index_; }
  constexpr int row() const noexcept { return index_ / 3; }
  constexpr int col() const noexcept { return index_ % 3; }
  constexpr std::uint16_t bit() const noexcept { return static_cast<std::uint16_t>(1u << index_); }

  std::string display() const;  // "(r,c)"

  constexpr auto operator<=>(const Cell&) const = default;

 private:
  static constexpr int checked(int index) {
    if (index < 0 || index > 8) throw GameError("cell index out of range 0..8");
    return index;
  }
  int index_;
};

/// Set of cells backed by a 9-bit mask. Iterates in ascending index order.
class CellSet {
 public:
  class iterator {
   public:
    using value_type = Cell;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint16_t rest) : rest_(rest) {}
    constexpr Cell operator*() const { return Cell(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= static_cast<std::uint16_t>(rest_ - 1);
      return *this;
    }
    constexpr iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint16_t rest_ = 0;
  };

  static constexpr std::uint16_t kAllBits = 0x1FF;

  constexpr CellSet() = default;
  constexpr explicit CellSet(std::uint16_t bits) : bits_(bits & kAllBits) {}
  constexpr CellSet(std::initializer_list<int> indices) {
    for (int i : indices) bits_ |= Cell(i).bit();
  }

  static constexpr CellSet all() { return CellSet(kAllBits); }
  static constexpr CellSet corners() { return CellSet{0, 2, 6, 8}; }
  static constexpr CellSet edges() { return CellSet{1, 3, 5, 7}; }
  static constexpr CellSet centre() { return CellSet{4}; }
  static constexpr CellSet of(Cell c) { return CellSet(c.bit()); }

  constexpr std::uint16_t bits() const noexcept { return bits_; }
  constexpr int size() const noexcept { return std::popcount(bits_); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool contains(Cell c) const noexcept { return (bits_ & c.bit()) != 0; }
  constexpr void insert(Cell c) noexcept { bits_ |= c.bit(); }
  constexpr void erase(Cell c) noexcept { bits_ &= static_cast<std::uint16_t>(~c.bit()); }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  /// n-th member in ascending order; n < size().
  Cell nth(int n) const;
  std::vector<int> indices() const;

  constexpr CellSet operator&(CellSet o) const { return CellSet(bits_ & o.bits_); }
  constexpr CellSet operator|(CellSet o) const { return CellSet(bits_ | o.bits_); }
  constexpr CellSet operator-(CellSet o) const { return CellSet(bits_ & ~o.bits_); }
  constexpr bool operator==(const CellSet&) const = default;

 private:
  std::uint16_t bits_ = 0;
};

/// The eight winning lines: rows, columns, diagonals.
inline constexpr std::array<std::uint16_t, 8> kLines = {
    0b000'000'111, 0b000'111'000, 0b111'000'000,  // rows
    0b001'001'001, 0b010'010'010, 0b100'100'100,  // columns
    0b100'010'001, 0b001'010'100,                 // diagonals
};

constexpr bool has_line(std::uint16_t bits) noexcept {
  for (auto line : kLines)
    if ((bits & line) == line) return true;
  return false;
}

enum class Outcome : std::uint8_t { XWin, OWin, Draw, Ongoing };

std::string_view to_string(Outcome o) noexcept;
std::optional<Outcome> parse_outcome(std::string_view text);
constexpr Outcome win_for(Mark m) noexcept { return m == Mark::X ? Outcome::XWin : Outcome::OWin; }

/// Immutable 3x3 position. The first mover is stored so the move-count
/// parity can be validated for games started by either mark.
class Board {
 public:
  explicit Board(Mark first_mover = Mark::X) : first_(first_mover) {}

  /// Validates parity and rejects positions with two winners or a winner
  /// that is not the last mover.
  static Board from_cells(CellSet x, CellSet o, Mark first_mover);

  /// 9 characters from {X, O, .}, row-major. Without an explicit first
  /// mover, the mark with more stones moved first; on a tie X is assumed.
  static Board from_text(std::string_view text, std::optional<Mark> first_mover = std::nullopt);

  std::optional<Mark> at(Cell c) const noexcept;
  CellSet cells_of(Mark m) const noexcept { return CellSet(m == Mark::X ? x_ : o_); }
  CellSet occupied() const noexcept { return CellSet(static_cast<std::uint16_t>(x_ | o_)); }
  CellSet empty_cells() const noexcept { return CellSet::all() - occupied(); }
  bool is_empty(Cell c) const noexcept { return !occupied().contains(c); }

  Mark first_mover() const noexcept { return first_; }
  int move_count() const noexcept { return std::popcount(static_cast<unsigned>(x_ | o_)); }
  Mark to_move() const noexcept { return move_count() % 2 == 0 ? first_ : opponent(first_); }

  /// Places the side-to-move's mark. Throws on occupied cells and on
  /// finished games.
  Board play(Cell c) const;

  std::string text() const;
  /// Multi-line grid for terminals.
  std::string render() const;

  bool operator==(const Board&) const = default;

 private:
  Board(std::uint16_t x, std::uint16_t o, Mark first) : x_(x), o_(o), first_(first) {}

  std::uint16_t x_ = 0;
  std::uint16_t o_ = 0;
  Mark first_;
};

CellClass classify(Cell c) noexcept;
Outcome outcome(const Board& b) noexcept;
inline bool is_terminal(const Board& b) noexcept { return outcome(b) != Outcome::Ongoing; }

/// Empty cells where `mark` completes a line.
CellSet winning_moves(const Board& b, Mark mark) noexcept;
/// Empty cells after which `mark` has two or more winning moves.
CellSet fork_moves(const Board& b, Mark mark) noexcept;

// Geometry. Adjacency is king-move (Chebyshev) distance 1.
int chebyshev(Cell a, Cell b) noexcept;
bool adjacent(Cell a, Cell b) noexcept;
Cell diag_opposite(Cell corner);
CellSet corners_adjacent_to(Cell edge);
CellSet nearer_edges(Cell edge);
Cell opposite_edge(Cell edge);
/// The corner touching both edges; the edges must be mutually nearer.
Cell shared_corner(Cell edge_a, Cell edge_b);
/// Candidates minimising the summed Euclidean distance to every anchor.
/// Ties are all returned.
CellSet min_distance_corners(CellSet anchors, CellSet candidates);

/// One element of the dihedral group of the square, as a cell permutation.
class Symmetry {
 public:
  constexpr explicit Symmetry(std::array<std::uint8_t, 9> image) : image_(image) {}

  Cell apply(Cell c) const noexcept { return Cell(image_[c.index()]); }
  CellSet apply(CellSet s) const noexcept;
  Board apply(const Board& b) const;
  Symmetry inverse() const noexcept;

 private:
  std::array<std::uint8_t, 9> image_;
};

/// Rotations by 0/90/180/270 degrees, then the same rotations applied after
/// a transpose. Element 0 is the identity.
const std::array<Symmetry, 8>& d4() noexcept;
std::array<Board, 8> d4_transforms(const Board& b);

}  // namespace t3dt
