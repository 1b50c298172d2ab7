#include "netevo/genlang.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace netevo {

namespace {

    struct OpInfo {
        Op op;
        std::string_view symbol;
        int arity;
    };

    constexpr std::array<OpInfo, kOpCount> kOps { {
        { Op::Add, "+", 2 },
        { Op::Sub, "-", 2 },
        { Op::Mul, "*", 2 },
        { Op::Div, "/", 2 },
        { Op::Pow, "pow", 2 },
        { Op::Min, "min", 2 },
        { Op::Max, "max", 2 },
        { Op::Exp, "exp", 1 },
        { Op::Log, "log", 1 },
        { Op::Abs, "abs", 1 },
        { Op::Greater, ">", 4 },
        { Op::Less, "<", 4 },
        { Op::Equal, "=", 4 },
        { Op::IsZero, "=0", 3 },
        { Op::Psi, "psi", 3 },
    } };

    constexpr std::array<std::string_view, kVarCount> kVarNames {
        "i", "j", "(indeg i)", "(indeg j)", "(outdeg i)", "(outdeg j)", "du", "dd", "dr"
    };

    constexpr std::array<Var, 5> kUndirectedVars { Var::I, Var::J, Var::IndegI, Var::IndegJ, Var::Du };
    constexpr std::array<Var, kVarCount> kDirectedVars {
        Var::I, Var::J, Var::IndegI, Var::IndegJ, Var::OutdegI, Var::OutdegJ, Var::Du, Var::Dd, Var::Dr
    };

    constexpr double kExpClamp = 50.0;

    inline double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

    // Group-affinity test on 1-based identifiers. |g| is truncated to an
    // integer; g < 1 puts every vertex in one group.
    bool same_group(double g, std::int64_t i, std::int64_t j)
    {
        double groups = std::trunc(std::fabs(g));
        if (groups < 1.0)
            return true;
        if (groups >= 9.0e15)
            return i == j;
        auto m = static_cast<std::int64_t>(groups);
        return (i % m) == (j % m);
    }

} // namespace

int arity(Op op) { return kOps[static_cast<std::size_t>(op)].arity; }
std::string_view op_symbol(Op op) { return kOps[static_cast<std::size_t>(op)].symbol; }
std::string_view var_symbol(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

bool is_directed_only(Var v) { return v == Var::OutdegI || v == Var::OutdegJ || v == Var::Dd || v == Var::Dr; }

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position))
    , position_(position)
    , detail_(what)
{
}

double ArcContext::get(Var v) const
{
    if (!directed && is_directed_only(v))
        throw StructuralError("directed-only variable " + std::string(var_symbol(v)) + " read in undirected context");
    switch (v) {
    case Var::I:
        return static_cast<double>(i);
    case Var::J:
        return static_cast<double>(j);
    case Var::IndegI:
        return static_cast<double>(indeg_i);
    case Var::IndegJ:
        return static_cast<double>(indeg_j);
    case Var::OutdegI:
        return static_cast<double>(outdeg_i);
    case Var::OutdegJ:
        return static_cast<double>(outdeg_j);
    case Var::Du:
        return d_u;
    case Var::Dd:
        return d_d;
    case Var::Dr:
        return d_r;
    }
    throw StructuralError("unknown variable");
}

void validate(std::span<const ExprNode> prefix, bool directed)
{
    if (prefix.empty())
        throw StructuralError("empty program");
    // Number of subtrees still to be read.
    std::size_t open = 1;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        if (open == 0)
            throw StructuralError("trailing nodes after complete tree at node " + std::to_string(k));
        const auto& n = prefix[k];
        --open;
        switch (n.kind) {
        case ExprNode::Kind::Constant:
            if (!std::isfinite(n.value))
                throw StructuralError("non-finite constant at node " + std::to_string(k));
            break;
        case ExprNode::Kind::Variable:
            if (static_cast<std::size_t>(n.var) >= kVarCount)
                throw StructuralError("unknown variable at node " + std::to_string(k));
            if (!directed && is_directed_only(n.var))
                throw StructuralError("variable " + std::string(var_symbol(n.var)) + " is not available for undirected networks");
            break;
        case ExprNode::Kind::Operator:
            if (static_cast<std::size_t>(n.op) >= kOpCount)
                throw StructuralError("unknown operator at node " + std::to_string(k));
            open += static_cast<std::size_t>(arity(n.op));
            break;
        }
    }
    if (open != 0)
        throw StructuralError("incomplete tree: " + std::to_string(open) + " missing operand(s)");
}

GeneratorProgram::GeneratorProgram(std::vector<ExprNode> prefix, bool directed)
    : nodes_(std::move(prefix))
    , directed_(directed)
{
    validate(nodes_, directed_);
    sizes_.assign(nodes_.size(), 1);
    for (std::size_t k = nodes_.size(); k-- > 0;) {
        const auto& n = nodes_[k];
        if (n.kind == ExprNode::Kind::Variable)
            vars_.set(n.var);
        if (n.kind != ExprNode::Kind::Operator)
            continue;
        std::size_t child = k + 1;
        for (int c = 0; c < arity(n.op); ++c)
            child += sizes_[child];
        sizes_[k] = static_cast<std::uint32_t>(child - k);
    }
}

GeneratorProgram GeneratorProgram::constant(double value, bool directed)
{
    return GeneratorProgram({ ExprNode::constant(value) }, directed);
}

GeneratorProgram GeneratorProgram::variable(Var v, bool directed)
{
    return GeneratorProgram({ ExprNode::variable(v) }, directed);
}

std::size_t GeneratorProgram::depth() const
{
    std::vector<std::size_t> d(nodes_.size(), 1);
    std::size_t best = 1;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        best = std::max(best, d[k]);
        if (nodes_[k].kind != ExprNode::Kind::Operator)
            continue;
        std::size_t child = k + 1;
        for (int c = 0; c < arity(nodes_[k].op); ++c) {
            d[child] = d[k] + 1;
            child += sizes_[child];
        }
    }
    return best;
}

double GeneratorProgram::eval_at(std::size_t index, const ArcContext& ctx) const
{
    const auto& n = nodes_[index];
    if (n.kind == ExprNode::Kind::Constant)
        return n.value;
    if (n.kind == ExprNode::Kind::Variable)
        return finite_or_zero(ctx.get(n.var));

    const std::size_t c0 = index + 1;
    auto next = [&](std::size_t c) { return c + sizes_[c]; };
    auto arg = [&](std::size_t c) { return eval_at(c, ctx); };

    double r = 0.0;
    switch (n.op) {
    case Op::Add:
        r = arg(c0) + arg(next(c0));
        break;
    case Op::Sub:
        r = arg(c0) - arg(next(c0));
        break;
    case Op::Mul:
        r = arg(c0) * arg(next(c0));
        break;
    case Op::Div: {
        double a = arg(c0);
        double b = arg(next(c0));
        r = b == 0.0 ? 0.0 : a / b;
        break;
    }
    case Op::Pow: {
        double a = arg(c0);
        double b = arg(next(c0));
        r = std::copysign(std::pow(std::fabs(a), b), a);
        break;
    }
    case Op::Min:
        r = std::min(arg(c0), arg(next(c0)));
        break;
    case Op::Max:
        r = std::max(arg(c0), arg(next(c0)));
        break;
    case Op::Exp:
        r = std::exp(std::clamp(arg(c0), -kExpClamp, kExpClamp));
        break;
    case Op::Log: {
        double a = arg(c0);
        r = a == 0.0 ? 0.0 : std::log(std::fabs(a));
        break;
    }
    case Op::Abs:
        r = std::fabs(arg(c0));
        break;
    case Op::Greater:
    case Op::Less:
    case Op::Equal: {
        std::size_t cb = next(c0);
        std::size_t ct = next(cb);
        std::size_t ce = next(ct);
        double a = arg(c0);
        double b = arg(cb);
        bool cond = n.op == Op::Greater ? a > b : n.op == Op::Less ? a < b : a == b;
        r = cond ? arg(ct) : arg(ce);
        break;
    }
    case Op::IsZero: {
        std::size_t ct = next(c0);
        std::size_t ce = next(ct);
        r = arg(c0) == 0.0 ? arg(ct) : arg(ce);
        break;
    }
    case Op::Psi: {
        std::size_t ca = next(c0);
        std::size_t cb = next(ca);
        r = same_group(arg(c0), ctx.i, ctx.j) ? arg(ca) : arg(cb);
        break;
    }
    }
    return finite_or_zero(r);
}

double evaluate(const GeneratorProgram& prog, const ArcContext& ctx)
{
    return prog.eval_at(0, ctx);
}

// --- text format -----------------------------------------------------------

namespace {

    class Parser {
    public:
        Parser(std::string_view text, bool directed)
            : text_(text)
            , directed_(directed)
        {
        }

        std::vector<ExprNode> parse()
        {
            parse_expr();
            skip_ws();
            if (pos_ != text_.size())
                throw ParseError("unexpected trailing input", pos_);
            return std::move(out_);
        }

    private:
        void skip_ws()
        {
            while (pos_ < text_.size()) {
                char c = text_[pos_];
                if (c == '#') {
                    while (pos_ < text_.size() && text_[pos_] != '\n')
                        ++pos_;
                } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                    ++pos_;
                } else {
                    break;
                }
            }
        }

        std::string_view atom()
        {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size()) {
                char c = text_[pos_];
                if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#')
                    break;
                ++pos_;
            }
            if (start == pos_)
                throw ParseError(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input", pos_);
            return text_.substr(start, pos_ - start);
        }

        void expect_close(std::string_view context)
        {
            skip_ws();
            if (pos_ >= text_.size())
                throw ParseError("unbalanced parentheses: missing ')' to close " + std::string(context), pos_);
            if (text_[pos_] != ')')
                throw ParseError("expected ')' to close " + std::string(context), pos_);
            ++pos_;
        }

        void push_var(Var v, std::size_t at)
        {
            if (!directed_ && is_directed_only(v))
                throw ParseError("variable " + std::string(var_symbol(v)) + " is not available for undirected networks", at);
            out_.push_back(ExprNode::variable(v));
        }

        void parse_expr()
        {
            skip_ws();
            if (pos_ >= text_.size())
                throw ParseError("unexpected end of input", pos_);
            if (text_[pos_] == ')')
                throw ParseError("unexpected ')'", pos_);
            if (text_[pos_] != '(') {
                parse_atom();
                return;
            }
            std::size_t open_at = pos_++;
            std::size_t head_at = pos_;
            std::string_view head = atom();
            if (head == "indeg" || head == "outdeg") {
                std::size_t which_at = pos_;
                std::string_view which = atom();
                bool in = head == "indeg";
                if (which == "i")
                    push_var(in ? Var::IndegI : Var::OutdegI, which_at);
                else if (which == "j")
                    push_var(in ? Var::IndegJ : Var::OutdegJ, which_at);
                else
                    throw ParseError("expected 'i' or 'j' after " + std::string(head), which_at);
                expect_close(head);
                return;
            }
            auto it = std::find_if(kOps.begin(), kOps.end(), [&](const OpInfo& o) { return o.symbol == head; });
            if (it == kOps.end())
                throw ParseError("unknown operator '" + std::string(head) + "'", head_at);
            out_.push_back(ExprNode::op_node(it->op));
            int count = 0;
            for (;;) {
                skip_ws();
                if (pos_ >= text_.size())
                    throw ParseError("unbalanced parentheses: missing ')' for '('", open_at);
                if (text_[pos_] == ')')
                    break;
                parse_expr();
                ++count;
            }
            if (count != it->arity)
                throw ParseError("operator '" + std::string(head) + "' expects " + std::to_string(it->arity)
                        + " operand(s), got " + std::to_string(count),
                    head_at);
            ++pos_;
        }

        void parse_atom()
        {
            std::size_t at = pos_;
            std::string_view a = atom();
            if (a == "i")
                return push_var(Var::I, at);
            if (a == "j")
                return push_var(Var::J, at);
            if (a == "du")
                return push_var(Var::Du, at);
            if (a == "dd")
                return push_var(Var::Dd, at);
            if (a == "dr")
                return push_var(Var::Dr, at);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
            if (ec != std::errc() || ptr != a.data() + a.size())
                throw ParseError("unknown symbol '" + std::string(a) + "'", at);
            if (!std::isfinite(v))
                throw ParseError("constant must be finite", at);
            out_.push_back(ExprNode::constant(v));
        }

        std::string_view text_;
        bool directed_;
        std::size_t pos_ = 0;
        std::vector<ExprNode> out_;
    };

    void print_at(const GeneratorProgram& prog, std::size_t index, std::string& out)
    {
        const auto& n = prog.nodes()[index];
        switch (n.kind) {
        case ExprNode::Kind::Constant: {
            std::array<char, 64> buf {};
            auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
            out.append(buf.data(), res.ptr);
            return;
        }
        case ExprNode::Kind::Variable:
            out += var_symbol(n.var);
            return;
        case ExprNode::Kind::Operator:
            break;
        }
        out += '(';
        out += op_symbol(n.op);
        std::size_t child = index + 1;
        for (int c = 0; c < arity(n.op); ++c) {
            out += ' ';
            print_at(prog, child, out);
            child = prog.subtree_end(child);
        }
        out += ')';
    }

} // namespace

GeneratorProgram parse_program(std::string_view text, bool directed)
{
    return GeneratorProgram(Parser(text, directed).parse(), directed);
}

std::string print_program(const GeneratorProgram& prog)
{
    std::string out;
    print_at(prog, 0, out);
    return out;
}

GeneratorProgram load_program(const std::filesystem::path& path, bool directed)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open program file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_program(ss.str(), directed);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.detail(), e.position());
    }
}

void save_program(const std::filesystem::path& path, const GeneratorProgram& prog)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write program file " + path.string());
    out << print_program(prog) << '\n';
}

// --- random generation and mutation ----------------------------------------

namespace {

    ExprNode random_leaf(bool directed, Rng& rng)
    {
        std::span<const Var> vars = directed ? std::span<const Var>(kDirectedVars) : std::span<const Var>(kUndirectedVars);
        // One slot per legal variable plus one for a constant.
        std::size_t pick = uniform_index(rng, vars.size() + 1);
        if (pick < vars.size())
            return ExprNode::variable(vars[pick]);
        if (bernoulli(rng, 0.5))
            return ExprNode::constant(static_cast<double>(std::uniform_int_distribution<int>(0, 10)(rng)));
        return ExprNode::constant(10.0 - uniform_real(rng, 0.0, 10.0));
    }

    void grow(const TreeGenParams& params, bool directed, int depth, Rng& rng, std::vector<ExprNode>& out)
    {
        if (depth >= params.max_depth || bernoulli(rng, params.terminal_probability)) {
            out.push_back(random_leaf(directed, rng));
            return;
        }
        Op op = kOps[uniform_index(rng, kOpCount)].op;
        out.push_back(ExprNode::op_node(op));
        for (int c = 0; c < arity(op); ++c)
            grow(params, directed, depth + 1, rng, out);
    }

    std::vector<ExprNode> grow_tree(const TreeGenParams& params, bool directed, Rng& rng)
    {
        if (params.max_depth < 1)
            throw std::invalid_argument("max_depth must be >= 1");
        std::vector<ExprNode> out;
        grow(params, directed, 1, rng, out);
        return out;
    }

} // namespace

GeneratorProgram random_program(const TreeGenParams& params, Rng& rng)
{
    return GeneratorProgram(grow_tree(params, params.directed, rng), params.directed);
}

GeneratorProgram mutate(const GeneratorProgram& prog, const TreeGenParams& params, Rng& rng)
{
    std::size_t cut = uniform_index(rng, prog.length());
    GeneratorProgram donor(grow_tree(params, prog.directed(), rng), prog.directed());
    std::size_t pick = uniform_index(rng, donor.length());

    auto src = prog.nodes();
    auto graft = donor.nodes();
    std::vector<ExprNode> out;
    out.reserve(src.size() + graft.size());
    out.insert(out.end(), src.begin(), src.begin() + static_cast<std::ptrdiff_t>(cut));
    out.insert(out.end(), graft.begin() + static_cast<std::ptrdiff_t>(pick),
        graft.begin() + static_cast<std::ptrdiff_t>(donor.subtree_end(pick)));
    out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(prog.subtree_end(cut)), src.end());
    return GeneratorProgram(std::move(out), prog.directed());
}

} // namespace netevo
