#ifndef BIHULL_LP_FORMAT_HPP
#define BIHULL_LP_FORMAT_HPP

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bihull/constraints.hpp"
#include "bihull/simplex.hpp"

namespace bihull {

/// In-memory form of the textual LP format. Linear terms plus optional
/// squared terms (written as bracketed "q v ^ 2" blocks). Coefficients are
/// rendered as exact decimals when the denominator is 2^a 5^b and as num/den
/// otherwise, so files round-trip coefficient-exactly through the parser.
struct LpFile {
    struct FileRow {
        std::string name;
        std::vector<std::pair<std::string, Rat>> linear;
        std::vector<std::pair<std::string, Rat>> quadratic;  // squared variables
        RowSense sense = RowSense::LE;
        Rat rhs;
    };
    struct VarBound {
        std::string name;
        std::optional<Rat> lo, up;
    };

    OptDir direction = OptDir::Min;
    std::vector<std::string> comments;
    std::vector<std::pair<std::string, Rat>> objective_linear;
    std::vector<std::pair<std::string, Rat>> objective_quadratic;
    std::vector<FileRow> rows;
    std::vector<VarBound> bounds;

    bool operator==(const LpFile& other) const {
        return direction == other.direction && objective_linear == other.objective_linear &&
               objective_quadratic == other.objective_quadratic && rows_equal(other) && bounds_equal(other);
    }

private:
    bool rows_equal(const LpFile& other) const {
        if (rows.size() != other.rows.size()) return false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& a = rows[i];
            const auto& b = other.rows[i];
            if (a.name != b.name || a.linear != b.linear || a.quadratic != b.quadratic || a.sense != b.sense ||
                a.rhs != b.rhs)
                return false;
        }
        return true;
    }
    bool bounds_equal(const LpFile& other) const {
        if (bounds.size() != other.bounds.size()) return false;
        for (std::size_t i = 0; i < bounds.size(); ++i)
            if (bounds[i].name != other.bounds[i].name || bounds[i].lo != other.bounds[i].lo ||
                bounds[i].up != other.bounds[i].up)
                return false;
        return true;
    }
};

namespace detail {

inline void write_terms(std::ostream& os, const std::vector<std::pair<std::string, Rat>>& linear,
                        const std::vector<std::pair<std::string, Rat>>& quadratic) {
    bool first = true;
    for (const auto& [name, c] : linear) {
        Rat mag = rat_abs(c);
        os << (first ? (c < 0 ? "- " : "") : (c < 0 ? " - " : " + ")) << rat_to_string(mag) << " " << name;
        first = false;
    }
    if (!quadratic.empty()) {
        os << (first ? "[ " : " + [ ");
        bool qfirst = true;
        for (const auto& [name, c] : quadratic) {
            Rat mag = rat_abs(c);
            os << (qfirst ? (c < 0 ? "- " : "") : (c < 0 ? " - " : " + ")) << rat_to_string(mag) << " " << name
               << " ^ 2";
            qfirst = false;
        }
        os << " ]";
        first = false;
    }
    if (first) os << "0";
}

}  // namespace detail

inline void write_lp_file(std::ostream& os, const LpFile& f) {
    for (const auto& c : f.comments) os << "\\ " << c << "\n";
    os << (f.direction == OptDir::Min ? "Minimize" : "Maximize") << "\n obj: ";
    detail::write_terms(os, f.objective_linear, f.objective_quadratic);
    os << "\nSubject To\n";
    for (const auto& row : f.rows) {
        os << " " << row.name << ": ";
        detail::write_terms(os, row.linear, row.quadratic);
        switch (row.sense) {
            case RowSense::LE: os << " <= "; break;
            case RowSense::GE: os << " >= "; break;
            case RowSense::EQ: os << " = "; break;
        }
        os << rat_to_string(row.rhs) << "\n";
    }
    os << "Bounds\n";
    for (const auto& b : f.bounds) {
        os << " ";
        if (!b.lo && !b.up) {
            os << b.name << " free";
        } else if (b.lo && b.up) {
            os << rat_to_string(*b.lo) << " <= " << b.name << " <= " << rat_to_string(*b.up);
        } else if (b.lo) {
            os << b.name << " >= " << rat_to_string(*b.lo);
        } else {
            os << b.name << " <= " << rat_to_string(*b.up);
        }
        os << "\n";
    }
    os << "End\n";
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('\\');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto push = [&]() {
        if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    };
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            push();
        } else if (ch == '[' || ch == ']' || ch == '^' || ch == ':') {
            push();
            tokens.push_back(std::string(1, ch));
        } else {
            cur.push_back(ch);
        }
    }
    push();
    return tokens;
}

inline bool is_number_start(const std::string& tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.' ||
                            ((tok[0] == '+' || tok[0] == '-') && tok.size() > 1));
}

/// Parses "terms" up to a sense token or end: [+-] coeff name [^ 2], with a
/// bracketed quadratic section allowed anywhere.
struct TermParser {
    const std::vector<std::string>& tok;
    std::size_t pos;

    bool at_sense() const {
        if (pos >= tok.size()) return true;
        return tok[pos] == "<=" || tok[pos] == ">=" || tok[pos] == "=" || tok[pos] == "<" || tok[pos] == ">";
    }

    void run(std::vector<std::pair<std::string, Rat>>& linear, std::vector<std::pair<std::string, Rat>>& quadratic) {
        bool in_bracket = false;
        int sign = 1;
        while (pos < tok.size()) {
            const std::string& t = tok[pos];
            if (!in_bracket && at_sense()) return;
            if (t == "[") {
                in_bracket = true;
                ++pos;
                continue;
            }
            if (t == "]") {
                in_bracket = false;
                ++pos;
                continue;
            }
            if (t == "+") {
                sign = 1;
                ++pos;
                continue;
            }
            if (t == "-") {
                sign = -1;
                ++pos;
                continue;
            }
            Rat coeff(sign);
            if (is_number_start(t)) {
                coeff = Rat(sign) * parse_rational(t);
                ++pos;
            }
            if (pos >= tok.size()) {
                if (coeff == 0) return;  // bare constant 0 objective
                fail(Errc::ParseError, "dangling coefficient in LP row");
            }
            if (is_number_start(tok[pos]) || tok[pos] == "+" || tok[pos] == "-" || at_sense() || tok[pos] == "]") {
                // bare constant (only 0 makes sense in this dialect)
                if (coeff != 0) fail(Errc::ParseError, "unexpected constant term in LP row");
                sign = 1;
                continue;
            }
            std::string name = tok[pos++];
            bool squared = false;
            if (pos + 1 < tok.size() && tok[pos] == "^" && tok[pos + 1] == "2") {
                squared = true;
                pos += 2;
            }
            (squared ? quadratic : linear).push_back({std::move(name), std::move(coeff)});
            sign = 1;
        }
    }
};

}  // namespace detail

inline LpFile parse_lp_file(std::istream& is) {
    LpFile f;
    enum class Section { Start, Objective, Rows, Bounds, Done };
    Section section = Section::Start;
    std::string line;
    std::string pending;  // objective may wrap onto the keyword line
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        return s;
    };
    while (std::getline(is, line)) {
        std::string body = detail::strip_comment(line);
        auto tokens = detail::tokenize(body);
        if (tokens.empty()) continue;
        std::string head = lower(tokens[0]);
        if (head == "minimize" || head == "maximize" || head == "min" || head == "max") {
            f.direction = (head[1] == 'a') ? OptDir::Max : OptDir::Min;
            section = Section::Objective;
            tokens.erase(tokens.begin());
            if (tokens.empty()) continue;
        } else if (head == "subject" || head == "st" || head == "s.t.") {
            section = Section::Rows;
            continue;
        } else if (head == "bounds") {
            section = Section::Bounds;
            continue;
        } else if (head == "end") {
            section = Section::Done;
            break;
        }
        switch (section) {
            case Section::Objective: {
                std::size_t start = 0;
                if (tokens.size() >= 2 && tokens[1] == ":") start = 2;  // "obj :"
                detail::TermParser tp{tokens, start};
                tp.run(f.objective_linear, f.objective_quadratic);
                break;
            }
            case Section::Rows: {
                LpFile::FileRow row;
                std::size_t start = 0;
                if (tokens.size() >= 2 && tokens[1] == ":") {
                    row.name = tokens[0];
                    start = 2;
                }
                detail::TermParser tp{tokens, start};
                tp.run(row.linear, row.quadratic);
                if (tp.pos >= tokens.size()) fail(Errc::ParseError, "row missing sense: " + line);
                const std::string& sense = tokens[tp.pos];
                row.sense = sense == ">=" || sense == ">" ? RowSense::GE
                            : sense == "=" ? RowSense::EQ
                                           : RowSense::LE;
                if (tp.pos + 1 >= tokens.size()) fail(Errc::ParseError, "row missing rhs: " + line);
                row.rhs = parse_rational(tokens[tp.pos + 1]);
                f.rows.push_back(std::move(row));
                break;
            }
            case Section::Bounds: {
                LpFile::VarBound b;
                if (tokens.size() == 2 && lower(tokens[1]) == "free") {
                    b.name = tokens[0];
                } else if (tokens.size() == 5 && tokens[1] == "<=" && tokens[3] == "<=") {
                    b.lo = parse_rational(tokens[0]);
                    b.name = tokens[2];
                    b.up = parse_rational(tokens[4]);
                } else if (tokens.size() == 3 && tokens[1] == ">=") {
                    b.name = tokens[0];
                    b.lo = parse_rational(tokens[2]);
                } else if (tokens.size() == 3 && tokens[1] == "<=") {
                    b.name = tokens[0];
                    b.up = parse_rational(tokens[2]);
                } else {
                    fail(Errc::ParseError, "unrecognized bound line: " + line);
                }
                f.bounds.push_back(std::move(b));
                break;
            }
            default:
                fail(Errc::ParseError, "content before the objective section: " + line);
        }
    }
    return f;
}

// ------------------------------------------------ LpProblem <-> LpFile

inline LpFile to_lp_file(const LpProblem& p, std::vector<std::string> comments = {}) {
    LpFile f;
    f.comments = std::move(comments);
    f.direction = p.direction;
    auto name_of = [&](int j) {
        if (j < static_cast<int>(p.var_names.size()) && !p.var_names[static_cast<std::size_t>(j)].empty())
            return p.var_names[static_cast<std::size_t>(j)];
        return "v" + std::to_string(j);
    };
    for (const auto& [j, c] : p.objective)
        if (c != 0) f.objective_linear.push_back({name_of(j), c});
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        LpFile::FileRow row;
        row.name = "c" + std::to_string(i + 1);
        for (const auto& [j, c] : p.rows[i].coeffs)
            if (c != 0) row.linear.push_back({name_of(j), c});
        row.sense = p.rows[i].sense;
        row.rhs = p.rows[i].rhs;
        f.rows.push_back(std::move(row));
    }
    for (int j = 0; j < p.num_vars; ++j)
        f.bounds.push_back({name_of(j), p.lower[static_cast<std::size_t>(j)], p.upper[static_cast<std::size_t>(j)]});
    return f;
}

/// Linear LP file back to a problem; quadratic content is rejected.
inline LpProblem lp_problem_from_file(const LpFile& f) {
    if (!f.objective_quadratic.empty()) fail(Errc::ParseError, "quadratic objective in linear LP");
    LpProblem p;
    p.direction = f.direction;
    std::map<std::string, int> index;
    auto var = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        int j = p.add_var(std::nullopt, std::nullopt, name);
        index[name] = j;
        return j;
    };
    for (const auto& b : f.bounds) var(b.name);
    for (const auto& [name, c] : f.objective_linear) p.objective.push_back({var(name), c});
    for (const auto& row : f.rows) {
        if (!row.quadratic.empty()) fail(Errc::ParseError, "quadratic row in linear LP");
        std::vector<std::pair<int, Rat>> coeffs;
        for (const auto& [name, c] : row.linear) coeffs.push_back({var(name), c});
        p.add_row(std::move(coeffs), row.sense, row.rhs);
    }
    for (const auto& b : f.bounds) {
        int j = index.at(b.name);
        p.lower[static_cast<std::size_t>(j)] = b.lo;
        p.upper[static_cast<std::size_t>(j)] = b.up;
    }
    return p;
}

// ------------------------------------------ ConstraintSystem -> LpFile

/// Serializes a relaxation: objective over the given edge weights (min), one
/// row per constraint, [0,1] box bounds. Labels ride along as row comments.
inline LpFile to_lp_file(const ConstraintSystem& sys, const std::map<std::pair<int, int>, Rat>& objective) {
    LpFile f;
    f.comments.push_back("relaxation " + sys.name());
    f.direction = OptDir::Min;
    for (const auto& [pair, w] : objective)
        if (w != 0) f.objective_linear.push_back({VarRef::Y(pair.first, pair.second).name(), w});
    std::size_t k = 0;
    for (const auto& c : sys.constraints()) {
        LpFile::FileRow row;
        row.name = "c" + std::to_string(++k);
        for (const auto& [v, q] : c.coeffs) row.linear.push_back({v.name(), q});
        row.sense = RowSense::LE;
        row.rhs = c.rhs;
        f.rows.push_back(std::move(row));
        f.comments.push_back(row.name + " = " + c.label.to_string());
    }
    for (int i = 1; i <= sys.n(); ++i) f.bounds.push_back({VarRef::X(i).name(), Rat(0), Rat(1)});
    for (const auto& [i, j] : sys.y_universe()) f.bounds.push_back({VarRef::Y(i, j).name(), Rat(0), Rat(1)});
    return f;
}

}  // namespace bihull

#endif
