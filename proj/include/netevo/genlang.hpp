#pragma once

// Generator expression language: prefix-encoded expression trees over the
// variables of a candidate arc, with protected (closed) arithmetic.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netevo/rng.hpp"

namespace netevo {

enum class Op : std::uint8_t {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
    Exp,
    Log,
    Abs,
    Greater, // (> a b then else)
    Less,    // (< a b then else)
    Equal,   // (= a b then else)
    IsZero,  // (=0 a then else)
    Psi,     // (psi g a b), arc endpoints implicit
};
inline constexpr std::size_t kOpCount = 15;

enum class Var : std::uint8_t { I, J, IndegI, IndegJ, OutdegI, OutdegJ, Du, Dd, Dr };
inline constexpr std::size_t kVarCount = 9;

int arity(Op op);
std::string_view op_symbol(Op op);
std::string_view var_symbol(Var v);
bool is_directed_only(Var v);

/// Bit set over Var, used to compute only the context fields a program reads.
class VarMask {
public:
    constexpr VarMask() = default;
    static constexpr VarMask all() { return VarMask(0x1ff); }

    void set(Var v) { bits_ |= bit(v); }
    [[nodiscard]] bool has(Var v) const { return (bits_ & bit(v)) != 0; }
    [[nodiscard]] bool any_distance() const { return has(Var::Du) || has(Var::Dd) || has(Var::Dr); }
    VarMask operator|(VarMask o) const { return VarMask(bits_ | o.bits_); }
    bool operator==(const VarMask&) const = default;

private:
    constexpr explicit VarMask(std::uint16_t b)
        : bits_(b)
    {
    }
    static constexpr std::uint16_t bit(Var v) { return static_cast<std::uint16_t>(1U << static_cast<unsigned>(v)); }
    std::uint16_t bits_ = 0;
};

struct ExprNode {
    enum class Kind : std::uint8_t { Constant, Variable, Operator };

    Kind kind = Kind::Constant;
    Op op = Op::Add;
    Var var = Var::I;
    double value = 0.0;

    static ExprNode constant(double v) { return { Kind::Constant, Op::Add, Var::I, v }; }
    static ExprNode variable(Var v) { return { Kind::Variable, Op::Add, v, 0.0 }; }
    static ExprNode op_node(Op o) { return { Kind::Operator, o, Var::I, 0.0 }; }

    bool operator==(const ExprNode& o) const
    {
        if (kind != o.kind)
            return false;
        switch (kind) {
        case Kind::Constant:
            return value == o.value;
        case Kind::Variable:
            return var == o.var;
        case Kind::Operator:
            return op == o.op;
        }
        return false;
    }
};

/// Raised for malformed trees: wrong arity, illegal variable for the mode,
/// non-finite constants. Evaluation never raises numeric errors.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position);
    [[nodiscard]] std::size_t position() const { return position_; }
    // Message without the position suffix.
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

/// Variable bindings for one candidate arc (i -> j). Identifiers are 1-based.
/// Directed-only fields are meaningless when `directed` is false and reading
/// them through `get` is a structural error.
struct ArcContext {
    bool directed = true;
    std::int64_t i = 1;
    std::int64_t j = 2;
    std::int64_t indeg_i = 0;
    std::int64_t indeg_j = 0;
    std::int64_t outdeg_i = 0;
    std::int64_t outdeg_j = 0;
    double d_u = 1.0;
    double d_d = 1.0;
    double d_r = 1.0;

    [[nodiscard]] double get(Var v) const;
};

/// An immutable, validated expression tree stored in prefix order.
class GeneratorProgram {
public:
    GeneratorProgram(std::vector<ExprNode> prefix, bool directed);

    static GeneratorProgram constant(double value, bool directed = true);
    static GeneratorProgram variable(Var v, bool directed = true);

    [[nodiscard]] std::span<const ExprNode> nodes() const { return nodes_; }
    [[nodiscard]] bool directed() const { return directed_; }
    [[nodiscard]] std::size_t length() const { return nodes_.size(); }
    [[nodiscard]] std::size_t depth() const;
    // One past the last node of the subtree rooted at `index`.
    [[nodiscard]] std::size_t subtree_end(std::size_t index) const { return index + sizes_[index]; }
    [[nodiscard]] VarMask variables() const { return vars_; }

    bool operator==(const GeneratorProgram& o) const { return directed_ == o.directed_ && nodes_ == o.nodes_; }

private:
    friend double evaluate(const GeneratorProgram&, const ArcContext&);
    double eval_at(std::size_t index, const ArcContext& ctx) const;

    std::vector<ExprNode> nodes_;
    std::vector<std::uint32_t> sizes_;
    VarMask vars_;
    bool directed_;
};

/// Throws StructuralError unless `prefix` is a complete well-formed tree
/// legal for the given mode.
void validate(std::span<const ExprNode> prefix, bool directed);

double evaluate(const GeneratorProgram& prog, const ArcContext& ctx);

GeneratorProgram parse_program(std::string_view text, bool directed = true);
std::string print_program(const GeneratorProgram& prog);

// Reads a program file: one s-expression, lines starting with '#' ignored.
GeneratorProgram load_program(const std::filesystem::path& path, bool directed = true);
void save_program(const std::filesystem::path& path, const GeneratorProgram& prog);

struct TreeGenParams {
    int max_depth = 5;
    double terminal_probability = 0.3;
    bool directed = true;
};

GeneratorProgram random_program(const TreeGenParams& params, Rng& rng);

/// Replaces one uniformly chosen node of `prog` with a uniformly chosen
/// subtree of a freshly generated tree. `prog` is left untouched; the fresh
/// tree uses prog's mode regardless of params.directed.
GeneratorProgram mutate(const GeneratorProgram& prog, const TreeGenParams& params, Rng& rng);

inline std::size_t program_length(const GeneratorProgram& prog) { return prog.length(); }

} // namespace netevo
