#include "xml2jsp/pattern.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace xml2jsp {

namespace {

constexpr int unbounded = -1;

using Range = std::pair<std::uint32_t, std::uint32_t>;

const std::vector<Range> space_ranges = {{'\t', '\r'}, {' ', ' '}};
const std::vector<Range> word_ranges = {{'0', '9'}, {'A', 'Z'}, {'_', '_'}, {'a', 'z'}};
const std::vector<Range> digit_ranges = {{'0', '9'}};

struct Node {
    enum class Kind { Empty, Char, Concat, Alt, Repeat } kind = Kind::Empty;
    Pattern::CharClass cls;
    std::vector<Node> kids;
    int min = 0;
    int max = 0;
};

// Decodes one code point; malformed bytes decode as themselves so that
// matching never fails on encoding grounds.
std::uint32_t decode(std::string_view s, std::size_t& i)
{
    const auto b = static_cast<unsigned char>(s[i++]);
    int extra = 0;
    std::uint32_t cp = b;
    if (b >= 0xC0 && b < 0xE0) {
        extra = 1;
        cp = b & 0x1F;
    } else if (b >= 0xE0 && b < 0xF0) {
        extra = 2;
        cp = b & 0x0F;
    } else if (b >= 0xF0 && b < 0xF8) {
        extra = 3;
        cp = b & 0x07;
    }
    if (i + static_cast<std::size_t>(extra) > s.size())
        return b;
    for (int k = 0; k < extra; ++k) {
        const auto c = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((c & 0xC0) != 0x80)
            return b;
        cp = (cp << 6) | (c & 0x3F);
    }
    i += static_cast<std::size_t>(extra);
    return cp;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Node parse()
    {
        Node n = alternation();
        if (pos_ != src_.size())
            error("unbalanced ')'");
        return n;
    }

private:
    [[noreturn]] void error(const std::string& what) const
    {
        throw PatternError("invalid pattern '" + std::string(src_) + "' at offset " + std::to_string(pos_) + ": " + what);
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    Node alternation()
    {
        Node first = concatenation();
        if (at_end() || peek() != '|')
            return first;
        Node alt;
        alt.kind = Node::Kind::Alt;
        alt.kids.push_back(std::move(first));
        while (!at_end() && peek() == '|') {
            ++pos_;
            alt.kids.push_back(concatenation());
        }
        return alt;
    }

    Node concatenation()
    {
        Node cat;
        cat.kind = Node::Kind::Concat;
        while (!at_end() && peek() != '|' && peek() != ')')
            cat.kids.push_back(quantified());
        return cat;
    }

    int number()
    {
        if (at_end() || peek() < '0' || peek() > '9')
            error("expected a number in quantifier");
        long v = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            v = v * 10 + (peek() - '0');
            if (v > 1000)
                error("quantifier bound too large");
            ++pos_;
        }
        return static_cast<int>(v);
    }

    Node quantified()
    {
        Node atom_node = atom();
        while (!at_end()) {
            int lo = 0;
            int hi = 0;
            const char c = peek();
            if (c == '*') {
                lo = 0, hi = unbounded;
                ++pos_;
            } else if (c == '+') {
                lo = 1, hi = unbounded;
                ++pos_;
            } else if (c == '?') {
                lo = 0, hi = 1;
                ++pos_;
            } else if (c == '{') {
                ++pos_;
                lo = number();
                hi = lo;
                if (!at_end() && peek() == ',') {
                    ++pos_;
                    hi = (!at_end() && peek() == '}') ? unbounded : number();
                }
                if (at_end() || peek() != '}')
                    error("expected '}'");
                ++pos_;
                if (hi != unbounded && hi < lo)
                    error("quantifier bounds out of order");
            } else {
                break;
            }
            Node rep;
            rep.kind = Node::Kind::Repeat;
            rep.min = lo;
            rep.max = hi;
            rep.kids.push_back(std::move(atom_node));
            atom_node = std::move(rep);
        }
        return atom_node;
    }

    // Class escapes append ranges; single-character escapes return the code point.
    bool class_escape(char e, std::vector<Range>& ranges, bool& negate_all)
    {
        switch (e) {
        case 's': ranges.insert(ranges.end(), space_ranges.begin(), space_ranges.end()); return true;
        case 'w': ranges.insert(ranges.end(), word_ranges.begin(), word_ranges.end()); return true;
        case 'd': ranges.insert(ranges.end(), digit_ranges.begin(), digit_ranges.end()); return true;
        case 'S':
        case 'W':
        case 'D': negate_all = true; return class_escape(static_cast<char>(e + ('a' - 'A')), ranges, negate_all);
        default: return false;
        }
    }

    std::uint32_t single_escape(char e)
    {
        switch (e) {
        case 'n': return '\n';
        case 'r': return '\r';
        case 't': return '\t';
        case '\\': case '|': case '.': case '-': case '^': case '?': case '*': case '+':
        case '{': case '}': case '(': case ')': case '[': case ']':
            return static_cast<unsigned char>(e);
        default: error(std::string("unsupported escape \\") + e);
        }
    }

    static Pattern::CharClass complement(const std::vector<Range>& ranges)
    {
        Pattern::CharClass c;
        c.ranges = ranges;
        c.negated = true;
        return c;
    }

    Node atom()
    {
        Node n;
        n.kind = Node::Kind::Char;
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Node inner = alternation();
            if (at_end() || peek() != ')')
                error("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == '*' || c == '+' || c == '?' || c == '{')
            error("quantifier without operand");
        if (c == '[')
            return char_class();
        if (c == '.') {
            ++pos_;
            n.cls = complement({{'\n', '\n'}, {'\r', '\r'}});
            return n;
        }
        if (c == '\\') {
            ++pos_;
            if (at_end())
                error("dangling escape");
            const char e = src_[pos_++];
            std::vector<Range> ranges;
            bool negate = false;
            if (class_escape(e, ranges, negate)) {
                n.cls.ranges = std::move(ranges);
                n.cls.negated = negate;
                return n;
            }
            const auto cp = single_escape(e);
            n.cls.ranges = {{cp, cp}};
            return n;
        }
        std::size_t i = pos_;
        const auto cp = decode(src_, i);
        pos_ = i;
        n.cls.ranges = {{cp, cp}};
        return n;
    }

    Node char_class()
    {
        ++pos_;  // '['
        Node n;
        n.kind = Node::Kind::Char;
        if (!at_end() && peek() == '^') {
            n.cls.negated = true;
            ++pos_;
        }
        bool first = true;
        for (;;) {
            if (at_end())
                error("unterminated character class");
            if (peek() == ']' && !first)
                break;
            first = false;
            std::uint32_t lo = 0;
            if (peek() == '\\') {
                ++pos_;
                if (at_end())
                    error("dangling escape");
                const char e = src_[pos_++];
                std::vector<Range> ranges;
                bool negate = false;
                if (class_escape(e, ranges, negate)) {
                    if (negate) {
                        // [\S] style: only supported as the sole-negated item via complement ranges.
                        std::vector<Range> comp;
                        std::uint32_t next = 0;
                        std::sort(ranges.begin(), ranges.end());
                        for (auto [a, b] : ranges) {
                            if (a > next)
                                comp.emplace_back(next, a - 1);
                            next = b + 1;
                        }
                        comp.emplace_back(next, 0x10FFFF);
                        ranges = std::move(comp);
                    }
                    n.cls.ranges.insert(n.cls.ranges.end(), ranges.begin(), ranges.end());
                    continue;
                }
                lo = single_escape(e);
            } else {
                std::size_t i = pos_;
                lo = decode(src_, i);
                pos_ = i;
            }
            std::uint32_t hi = lo;
            if (pos_ + 1 < src_.size() && peek() == '-' && src_[pos_ + 1] != ']') {
                ++pos_;
                if (peek() == '\\') {
                    ++pos_;
                    if (at_end())
                        error("dangling escape");
                    hi = single_escape(src_[pos_++]);
                } else {
                    std::size_t i = pos_;
                    hi = decode(src_, i);
                    pos_ = i;
                }
                if (hi < lo)
                    error("character range out of order");
            }
            n.cls.ranges.emplace_back(lo, hi);
        }
        ++pos_;  // ']'
        return n;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

class PatternCompiler {
public:
    explicit PatternCompiler(Pattern& p) : p_(p) {}

    void compile(const Node& n)
    {
        emit(n);
        push({Pattern::Instruction::Op::Match});
    }

private:
    using Op = Pattern::Instruction::Op;

    std::uint32_t push(Pattern::Instruction ins)
    {
        p_.program_.push_back(ins);
        if (p_.program_.size() > 100000)
            throw PatternError("pattern '" + p_.source_ + "' expands to too many states");
        return static_cast<std::uint32_t>(p_.program_.size() - 1);
    }

    std::uint32_t here() const { return static_cast<std::uint32_t>(p_.program_.size()); }

    void emit(const Node& n)
    {
        switch (n.kind) {
        case Node::Kind::Empty: break;
        case Node::Kind::Char: {
            p_.classes_.push_back(n.cls);
            push({Op::Char, static_cast<std::uint32_t>(p_.classes_.size() - 1)});
            break;
        }
        case Node::Kind::Concat:
            for (const auto& k : n.kids)
                emit(k);
            break;
        case Node::Kind::Alt: {
            std::vector<std::uint32_t> jumps;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i + 1 < n.kids.size()) {
                    const auto split = push({Op::Split});
                    p_.program_[split].x = here();
                    emit(n.kids[i]);
                    jumps.push_back(push({Op::Jump}));
                    p_.program_[split].y = here();
                } else {
                    emit(n.kids[i]);
                }
            }
            for (auto j : jumps)
                p_.program_[j].x = here();
            break;
        }
        case Node::Kind::Repeat: {
            const Node& body = n.kids.front();
            for (int i = 0; i < n.min; ++i)
                emit(body);
            if (n.max == unbounded) {
                const auto split = push({Op::Split});
                p_.program_[split].x = here();
                emit(body);
                push({Op::Jump, 0, split});
                p_.program_[split].y = here();
            } else {
                std::vector<std::uint32_t> splits;
                for (int i = n.min; i < n.max; ++i) {
                    const auto split = push({Op::Split});
                    p_.program_[split].x = here();
                    splits.push_back(split);
                    emit(body);
                }
                for (auto s : splits)
                    p_.program_[s].y = here();
            }
            break;
        }
        }
    }

    Pattern& p_;
};

bool Pattern::CharClass::contains(std::uint32_t cp) const
{
    const bool in = std::any_of(ranges.begin(), ranges.end(), [cp](const auto& r) { return cp >= r.first && cp <= r.second; });
    return in != negated;
}

Pattern::Pattern(std::string source) : source_(std::move(source))
{
    Parser parser(source_);
    const Node root = parser.parse();
    PatternCompiler(*this).compile(root);
}

// Pike VM: one pass over the text carrying the set of live states.
bool Pattern::matches(std::string_view text) const
{
    const auto n = program_.size();
    std::vector<std::uint32_t> current;
    std::vector<std::uint32_t> next;
    std::vector<std::uint64_t> mark(n, 0);
    std::uint64_t generation = 0;
    std::vector<std::uint32_t> stack;

    auto add = [&](std::vector<std::uint32_t>& list, std::uint32_t pc) {
        stack.push_back(pc);
        while (!stack.empty()) {
            const auto s = stack.back();
            stack.pop_back();
            if (mark[s] == generation)
                continue;
            mark[s] = generation;
            const auto& ins = program_[s];
            switch (ins.op) {
            case Instruction::Op::Jump: stack.push_back(ins.x); break;
            case Instruction::Op::Split:
                stack.push_back(ins.y);
                stack.push_back(ins.x);
                break;
            default: list.push_back(s); break;
            }
        }
    };

    ++generation;
    add(current, 0);
    std::size_t i = 0;
    while (i < text.size()) {
        if (current.empty())
            return false;
        const auto cp = decode(text, i);
        ++generation;
        next.clear();
        for (auto s : current) {
            const auto& ins = program_[s];
            if (ins.op == Instruction::Op::Char && classes_[ins.cls].contains(cp))
                add(next, s + 1);
        }
        std::swap(current, next);
    }
    return std::any_of(current.begin(), current.end(), [&](auto s) { return program_[s].op == Instruction::Op::Match; });
}

bool check_content_pattern(std::string_view text, const std::string& pattern)
{
    return Pattern(pattern).matches(text);
}

std::string to_xsd_pattern(std::string_view pattern)
{
    std::string out;
    bool in_class = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const char c = pattern[i];
        if (c == '\\' && i + 1 < pattern.size()) {
            const char e = pattern[++i];
            if (e == 'w')
                out += in_class ? "A-Za-z0-9_" : "[A-Za-z0-9_]";
            else if (e == 'd')
                out += in_class ? "0-9" : "[0-9]";
            else if (e == 'W' && !in_class)
                out += "[^A-Za-z0-9_]";
            else if (e == 'D' && !in_class)
                out += "[^0-9]";
            else if ((e == 'W' || e == 'D') && in_class)
                throw PatternError("cannot express negated class escape inside a class: " + std::string(pattern));
            else {
                out += '\\';
                out += e;
            }
            continue;
        }
        if (c == '[')
            in_class = true;
        else if (c == ']')
            in_class = false;
        out += c;
    }
    return out;
}

}  // namespace xml2jsp
