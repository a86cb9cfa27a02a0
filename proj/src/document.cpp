#include "hamtrio/document.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hamtrio/catalog.hpp"
#include "hamtrio/errors.hpp"
#include "hamtrio/parse.hpp"

namespace hamtrio::doc {

using jet::VarKind;
using jet::Vars;
using op::ScalarDiffOp;
using text::Tok;
using text::Token;
using text::TokenStream;

namespace {

const std::set<std::string> kKeywords{"fields", "params", "expr", "metric", "op", "trio", "functional",
                                      "casimirs", "chart", "inverse", "domain", "expect"};

[[noreturn]] void unknown(const Token& t, const std::string& what) {
    throw UnknownName(what + " '" + t.text + "' at " + std::to_string(t.line) + ":" + std::to_string(t.column));
}

[[noreturn]] void mismatch(const Token& t, const std::string& what) {
    throw DimensionMismatch(what + " at " + std::to_string(t.line) + ":" + std::to_string(t.column));
}

/// Either a scalar operator (functions are order-0 operators) or a matrix operator.
struct Value {
    bool matrix = false;
    ScalarDiffOp s;
    MatrixDiffOp M;

    static Value scalar(ScalarDiffOp x) { return {false, std::move(x), {}}; }
    static Value of(MatrixDiffOp x) { return {true, {}, std::move(x)}; }
    bool is_function() const { return !matrix && s.order() <= 0; }
    Expr function() const { return s.coeff(0); }
};

class Parser {
public:
    Parser(TokenStream& ts, Document& doc) : ts_(ts), doc_(doc) {}

    void run() {
        while (!ts_.at(Tok::End)) {
            if (ts_.accept(Tok::Newline)) continue;
            statement();
            if (!ts_.at(Tok::End)) ts_.expect(Tok::Newline, "end of line");
        }
    }

private:
    TokenStream& ts_;
    Document& doc_;
    bool lambda_coords_ = false;  // lambda1, lambda2, ... allowed (invariants)

    jet::JetContext ctx() const { return doc_.context(); }

    std::string new_name(const char* what) {
        const Token& t = ts_.expect(Tok::Ident, what);
        if (kKeywords.count(t.text) || t.text == "Dx" || t.text == "sqrt" || t.text == "eps" || t.text == "lambda")
            TokenStream::fail_at(t, "'" + t.text + "' is reserved");
        if (doc_.lines.count(t.text)) TokenStream::fail_at(t, "'" + t.text + "' is already defined");
        auto v = Vars::info(Vars::from_name(t.text)).kind;
        if (v != VarKind::Param) TokenStream::fail_at(t, "'" + t.text + "' is a field or covector name");
        if (std::find(doc_.params.begin(), doc_.params.end(), t.text) != doc_.params.end())
            TokenStream::fail_at(t, "'" + t.text + "' is a parameter");
        doc_.lines[t.text] = t.line;
        return t.text;
    }

    const Token& existing(const std::string& kind, bool ok(const Document&, const std::string&)) {
        const Token& t = ts_.expect(Tok::Ident, "a name");
        if (!ok(doc_, t.text)) unknown(t, "unknown " + kind);
        return t;
    }

    void require_fields(const Token& t) {
        if (doc_.fields == 0) TokenStream::fail_at(t, "'fields' must be declared first");
    }

    void statement() {
        const Token kw = ts_.expect(Tok::Ident, "a statement keyword");
        const std::string& k = kw.text;
        if (k == "fields") {
            if (doc_.fields) TokenStream::fail_at(kw, "fields declared twice");
            int n = 0;
            do {
                const Token& f = ts_.expect(Tok::Ident, "field name");
                if (f.text != "u" + std::to_string(n + 1)) TokenStream::fail_at(f, "fields must be u1, u2, ... in order");
                ++n;
            } while (ts_.accept(Tok::Comma));
            if (n > Vars::kMaxComponents) TokenStream::fail_at(kw, "too many fields");
            doc_.fields = n;
            doc_.order.emplace_back("fields", "");
        } else if (k == "params") {
            do {
                const Token& p = ts_.expect(Tok::Ident, "parameter name");
                if (Vars::info(Vars::from_name(p.text)).kind != VarKind::Param || p.text == "Dx" || p.text == "sqrt" ||
                    kKeywords.count(p.text) || doc_.lines.count(p.text))
                    TokenStream::fail_at(p, "'" + p.text + "' cannot be a parameter");
                if (std::find(doc_.params.begin(), doc_.params.end(), p.text) == doc_.params.end())
                    doc_.params.push_back(p.text);
            } while (ts_.accept(Tok::Comma));
            doc_.order.emplace_back("params", "");
        } else if (k == "expr") {
            require_fields(kw);
            std::string name = new_name("expression name");
            ts_.expect(Tok::Equals, "'='");
            doc_.exprs[name] = function_value("an expression");
            doc_.order.emplace_back(k, name);
        } else if (k == "metric") {
            require_fields(kw);
            std::string name = new_name("metric name");
            ts_.expect(Tok::Equals, "'='");
            const Token at = ts_.peek();
            Value v = sum();
            if (!v.matrix) mismatch(at, "metric must be a matrix");
            if (v.M.size() != doc_.fields) mismatch(at, "metric is " + std::to_string(v.M.size()) + "x" + std::to_string(v.M.size()) + " but there are " + std::to_string(doc_.fields) + " fields");
            if (v.M.order() > 0) TokenStream::fail_at(at, "metric entries must be functions");
            doc_.metrics[name] = Metric{v.M.coefficient_matrix(0)};
            doc_.order.emplace_back(k, name);
        } else if (k == "op") {
            require_fields(kw);
            std::string name = new_name("operator name");
            ts_.expect(Tok::Equals, "'='");
            const Token at = ts_.peek();
            Value v = sum();
            if (!v.matrix) {
                if (doc_.fields != 1) mismatch(at, "operator must be a " + std::to_string(doc_.fields) + "x" + std::to_string(doc_.fields) + " matrix");
                v = Value::of(MatrixDiffOp::identity(1, v.s));
            }
            if (v.M.size() != doc_.fields)
                mismatch(at, "operator is " + std::to_string(v.M.size()) + "x" + std::to_string(v.M.size()) + " but there are " + std::to_string(doc_.fields) + " fields");
            doc_.ops[name] = v.M;
            doc_.order.emplace_back(k, name);
        } else if (k == "trio") {
            std::string name = new_name("trio name");
            ts_.expect(Tok::Equals, "'='");
            TrioDef t;
            t.p1 = op_name();
            ts_.expect(Tok::Comma, "','");
            t.q1 = op_name();
            ts_.expect(Tok::Comma, "','");
            t.r = op_name();
            doc_.trios[name] = t;
            doc_.order.emplace_back(k, name);
        } else if (k == "functional") {
            require_fields(kw);
            std::string name = new_name("functional name");
            ts_.expect(Tok::Equals, "'='");
            doc_.functionals[name] = function_value("a density");
            doc_.order.emplace_back(k, name);
        } else if (k == "casimirs" || k == "chart" || k == "inverse" || k == "domain") {
            const Token& t = existing("trio", [](const Document& d, const std::string& n) { return d.trios.count(n) > 0; });
            std::string trio = t.text;
            bool dup = (k == "casimirs" && doc_.casimirs.count(trio)) || (k == "chart" && doc_.charts.count(trio)) ||
                       (k == "inverse" && doc_.inverses.count(trio)) || (k == "domain" && doc_.domains.count(trio));
            if (dup) TokenStream::fail_at(t, k + " for '" + trio + "' given twice");
            ts_.expect(Tok::Equals, "'='");
            if (k == "casimirs") {
                std::vector<std::string> names;
                do {
                    names.push_back(existing("functional", [](const Document& d, const std::string& n) {
                                        return d.functionals.count(n) > 0;
                                    }).text);
                } while (ts_.accept(Tok::Comma));
                doc_.casimirs[trio] = names;
            } else if (k == "domain") {
                const Token at = ts_.peek();
                std::vector<double> box;
                do box.push_back(real()); while (ts_.accept(Tok::Comma));
                if (box.size() != 2 * static_cast<std::size_t>(doc_.fields)) mismatch(at, "domain needs lo,hi for every field");
                for (std::size_t i = 0; i < box.size(); i += 2)
                    if (!(box[i] < box[i + 1])) TokenStream::fail_at(at, "domain interval must have lo < hi");
                doc_.domains[trio] = box;
            } else {
                const Token at = ts_.peek();
                auto list = function_list();
                if (static_cast<int>(list.size()) != doc_.fields) mismatch(at, k + " needs one function per field");
                (k == "chart" ? doc_.charts : doc_.inverses)[trio] = list;
            }
            doc_.order.emplace_back(k, trio);
        } else if (k == "expect") {
            expectation(kw);
        } else {
            TokenStream::fail_at(kw, "unknown statement '" + k + "'");
        }
    }

    void expectation(const Token& kw) {
        Expectation e;
        e.line = kw.line;
        const Token& kind = ts_.expect(Tok::Ident, "flow, invariants or match");
        if (kind.text == "flow") {
            e.kind = Expectation::Kind::Flow;
            e.subject = existing("trio", [](const Document& d, const std::string& n) { return d.trios.count(n) > 0; }).text;
            e.other = existing("functional", [](const Document& d, const std::string& n) { return d.functionals.count(n) > 0; }).text;
            ts_.expect(Tok::Equals, "'='");
            ts_.expect(Tok::LBracket, "'['");
            const Token at = ts_.peek();
            e.values = function_list();
            ts_.expect(Tok::RBracket, "']'");
            if (static_cast<int>(e.values.size()) != doc_.fields) mismatch(at, "flow needs one component per field");
        } else if (kind.text == "invariants") {
            e.kind = Expectation::Kind::Invariants;
            e.subject = existing("trio", [](const Document& d, const std::string& n) { return d.trios.count(n) > 0; }).text;
            ts_.expect(Tok::Equals, "'='");
            ts_.expect(Tok::LBracket, "'['");
            const Token at = ts_.peek();
            lambda_coords_ = true;
            e.values = function_list();
            lambda_coords_ = false;
            ts_.expect(Tok::RBracket, "']'");
            if (static_cast<int>(e.values.size()) != doc_.fields) mismatch(at, "one invariant per field expected");
        } else if (kind.text == "match") {
            e.kind = Expectation::Kind::Match;
            e.subject = op_name();
            if (ts_.at(Tok::Ident)) e.other = op_name();
            ts_.expect(Tok::Equals, "'='");
            const Token& fam = ts_.expect(Tok::Ident, "family name");
            const auto& tags = catalog::family_tags();
            if (std::find(tags.begin(), tags.end(), fam.text) == tags.end()) unknown(fam, "unknown family");
            e.family = fam.text;
            for (int side = 0; side < (e.other.empty() ? 1 : 2); ++side) {
                ts_.expect(Tok::LBracket, "'['");
                std::map<std::string, Expr> assignment;
                if (!ts_.at(Tok::RBracket)) {
                    do {
                        const Token& p = ts_.expect(Tok::Ident, "parameter name");
                        ts_.expect(Tok::Equals, "'='");
                        assignment[p.text] = function_value("a value");
                    } while (ts_.accept(Tok::Comma));
                }
                ts_.expect(Tok::RBracket, "']'");
                e.params.push_back(std::move(assignment));
            }
        } else {
            TokenStream::fail_at(kind, "unknown expectation '" + kind.text + "'");
        }
        doc_.expectations.push_back(std::move(e));
        doc_.order.emplace_back("expect", std::to_string(doc_.expectations.size() - 1));
    }

    std::string op_name() {
        const Token& t = ts_.expect(Tok::Ident, "operator name");
        if (!doc_.has_op(t.text)) unknown(t, "unknown operator");
        return t.text;
    }

    double real() {
        bool neg = ts_.accept(Tok::Minus);
        const Token& n = ts_.expect(Tok::Number, "a number");
        double v = text::parse_number(n).get_d();
        return neg ? -v : v;
    }

    Expr function_value(const char* what) {
        const Token at = ts_.peek();
        Value v = sum();
        if (!v.is_function()) TokenStream::fail_at(at, std::string("expected ") + what + ", found an operator");
        return v.function();
    }

    std::vector<Expr> function_list() {
        std::vector<Expr> out;
        do out.push_back(function_value("a function")); while (ts_.accept(Tok::Comma));
        return out;
    }

    // ---- operator expressions ----

    Value add(Value a, const Value& b, const Token& at, bool minus) {
        if (a.matrix != b.matrix) mismatch(at, "cannot add a scalar operator and a matrix");
        if (!a.matrix) return Value::scalar(minus ? a.s - b.s : a.s + b.s);
        if (a.M.size() != b.M.size()) mismatch(at, "matrix sizes differ");
        return Value::of(minus ? a.M - b.M : a.M + b.M);
    }

    Value mul(const Value& a, const Value& b, const Token& at) {
        if (!a.matrix && !b.matrix) return Value::scalar(a.s.compose(b.s, ctx()));
        if (!a.matrix) {
            if (a.is_function()) return Value::of(a.function() * b.M);
            return Value::of(MatrixDiffOp::identity(b.M.size(), a.s).compose(b.M, ctx()));
        }
        if (!b.matrix) return Value::of(a.M.compose(MatrixDiffOp::identity(a.M.size(), b.s), ctx()));
        if (a.M.size() != b.M.size()) mismatch(at, "matrix sizes differ");
        return Value::of(a.M.compose(b.M, ctx()));
    }

    Value sum() {
        Value v;
        if (ts_.at(Tok::Minus)) {
            ts_.next();
            v = negate(product());
        } else {
            ts_.accept(Tok::Plus);
            v = product();
        }
        for (;;) {
            const Token at = ts_.peek();
            if (ts_.accept(Tok::Plus))
                v = add(std::move(v), product(), at, false);
            else if (ts_.accept(Tok::Minus))
                v = add(std::move(v), product(), at, true);
            else
                return v;
        }
    }

    static Value negate(Value v) {
        if (v.matrix) v.M = -v.M;
        else v.s = -v.s;
        return v;
    }

    Value product() {
        Value v = unary();
        for (;;) {
            const Token at = ts_.peek();
            if (ts_.accept(Tok::Star)) {
                v = mul(v, unary(), at);
            } else if (ts_.accept(Tok::Slash)) {
                const Token den = ts_.peek();
                Value d = unary();
                if (!d.is_function()) TokenStream::fail_at(den, "can only divide by a function");
                if (d.function().is_zero()) TokenStream::fail_at(at, "division by zero");
                v = mul(v, Value::scalar(ScalarDiffOp(Expr(1) / d.function())), at);
            } else {
                return v;
            }
        }
    }

    Value unary() {
        if (ts_.accept(Tok::Minus)) return negate(unary());
        if (ts_.accept(Tok::Plus)) return unary();
        return power();
    }

    Value power() {
        const Token at = ts_.peek();
        Value base = primary();
        if (!ts_.accept(Tok::Caret)) return base;
        bool paren = ts_.accept(Tok::LParen);
        bool neg = ts_.accept(Tok::Minus);
        const Token& n = ts_.expect(Tok::Number, "integer exponent");
        if (n.text.find('.') != std::string::npos) TokenStream::fail_at(n, "exponent must be an integer");
        if (n.text.size() > 4) TokenStream::fail_at(n, "exponent too large");
        int e = std::stoi(n.text);
        if (paren) ts_.expect(Tok::RParen, "')'");
        if (base.is_function()) return Value::scalar(ScalarDiffOp(base.function().pow(neg ? -e : e)));
        if (neg) TokenStream::fail_at(at, "negative power of an operator");
        Value out = base.matrix ? Value::of(MatrixDiffOp::identity(base.M.size())) : Value::scalar(ScalarDiffOp(Expr(1)));
        for (int i = 0; i < e; ++i) out = mul(out, base, at);
        return out;
    }

    Value matrix_literal(const Token& open) {
        std::vector<std::vector<ScalarDiffOp>> rows;
        do {
            const Token row_at = ts_.expect(Tok::LBracket, "'[' starting a matrix row");
            std::vector<ScalarDiffOp> row;
            do {
                const Token at = ts_.peek();
                Value v = sum();
                if (v.matrix) mismatch(at, "matrix entries must be scalar operators");
                row.push_back(v.s);
            } while (ts_.accept(Tok::Comma));
            ts_.expect(Tok::RBracket, "']'");
            if (!rows.empty() && row.size() != rows.front().size()) mismatch(row_at, "matrix rows of different lengths");
            rows.push_back(std::move(row));
        } while (ts_.accept(Tok::Comma));
        ts_.expect(Tok::RBracket, "']'");
        if (rows.size() != rows.front().size()) mismatch(open, "matrix is not square");
        return Value::of(MatrixDiffOp::from_rows(rows));
    }

    Value primary() {
        const Token t = ts_.peek();
        if (t.kind == Tok::Number) {
            ts_.next();
            return Value::scalar(ScalarDiffOp(Expr(text::parse_number(t))));
        }
        if (t.kind == Tok::LParen) {
            ts_.next();
            Value v = sum();
            ts_.expect(Tok::RParen, "')'");
            return v;
        }
        if (t.kind == Tok::LBracket) {
            ts_.next();
            return matrix_literal(t);
        }
        if (t.kind != Tok::Ident) ts_.fail(std::string("expected an operand, found ") + text::token_name(t.kind));
        ts_.next();
        const std::string& id = t.text;
        if (id == "sqrt") {
            ts_.expect(Tok::LParen, "'(' after sqrt");
            const Token at = ts_.peek();
            Value r = sum();
            if (!r.is_function()) TokenStream::fail_at(at, "sqrt of an operator");
            ts_.expect(Tok::RParen, "')'");
            return Value::scalar(ScalarDiffOp(Expr::sqrt(r.function())));
        }
        if (ts_.at(Tok::LParen)) TokenStream::fail_at(t, "unknown function '" + id + "'");
        if (id == "Dx") return Value::scalar(ScalarDiffOp::D());
        if (auto it = doc_.ops.find(id); it != doc_.ops.end()) return Value::of(it->second);
        if (auto it = doc_.exprs.find(id); it != doc_.exprs.end()) return Value::scalar(ScalarDiffOp(it->second));
        if (id == "R2" || id == "R3_1" || id == "R3_2" || id == "R3_3") {
            if (doc_.fields != 2) mismatch(t, "canonical operator " + id + " is 2x2");
            return Value::of(catalog::canonical_operator(catalog::tag_from_name(id)));
        }
        if (id == "eps") return Value::scalar(ScalarDiffOp(Expr::var(op::eps_var())));
        if (id == "lambda") return Value::scalar(ScalarDiffOp(Expr::var(op::lambda_var())));
        const auto& info = Vars::info(Vars::from_name(id));
        if (info.kind == VarKind::Jet) {
            if (info.component > doc_.fields) unknown(t, "field index out of range in");
            if (info.order > Vars::kMaxOrder) unknown(t, "jet order too high in");
            return Value::scalar(ScalarDiffOp(Expr::var(Vars::from_name(id))));
        }
        if (info.kind == VarKind::Param) {
            if (std::find(doc_.params.begin(), doc_.params.end(), id) != doc_.params.end())
                return Value::scalar(ScalarDiffOp(Expr::param(id)));
            if (lambda_coords_ && id.size() > 6 && id.substr(0, 6) == "lambda") {
                const std::string idx = id.substr(6);
                if (std::all_of(idx.begin(), idx.end(), ::isdigit) && std::stoi(idx) >= 1 && std::stoi(idx) <= doc_.fields)
                    return Value::scalar(ScalarDiffOp(Expr::param(id)));
            }
            if (doc_.functionals.count(id) || doc_.trios.count(id) || doc_.metrics.count(id))
                TokenStream::fail_at(t, "'" + id + "' cannot be used inside an expression");
        }
        unknown(t, "unknown identifier");
    }
};

std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string join_exprs(const std::vector<Expr>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i].str();
    return out;
}

}  // namespace

bool Document::has_op(const std::string& name) const {
    return ops.count(name) || (fields == 2 && (name == "R2" || name == "R3_1" || name == "R3_2" || name == "R3_3"));
}

MatrixDiffOp Document::op(const std::string& name) const {
    if (auto it = ops.find(name); it != ops.end()) return it->second;
    if (has_op(name)) return catalog::canonical_operator(catalog::tag_from_name(name));
    throw UnknownName("operator '" + name + "'");
}

const TrioDef& Document::trio(const std::string& name) const {
    auto it = trios.find(name);
    if (it == trios.end()) throw UnknownName("trio '" + name + "'");
    return it->second;
}

std::string Document::str() const {
    std::ostringstream os;
    bool params_printed = false;
    for (const auto& [kw, name] : order) {
        if (kw == "fields") {
            os << "fields ";
            for (int i = 1; i <= fields; ++i) os << (i > 1 ? ", " : "") << "u" << i;
        } else if (kw == "params") {
            // every declaration is merged into the first one
            if (params_printed) continue;
            params_printed = true;
            os << "params ";
            for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i];
        } else if (kw == "expr") {
            os << "expr " << name << " = " << exprs.at(name).str();
        } else if (kw == "metric") {
            os << "metric " << name << " = " << MatrixDiffOp::multiplication(metrics.at(name).g).str();
        } else if (kw == "op") {
            os << "op " << name << " = " << ops.at(name).str();
        } else if (kw == "trio") {
            const auto& t = trios.at(name);
            os << "trio " << name << " = " << t.p1 << ", " << t.q1 << ", " << t.r;
        } else if (kw == "functional") {
            os << "functional " << name << " = " << functionals.at(name).str();
        } else if (kw == "casimirs") {
            os << "casimirs " << name << " = ";
            const auto& c = casimirs.at(name);
            for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
        } else if (kw == "chart") {
            os << "chart " << name << " = " << join_exprs(charts.at(name));
        } else if (kw == "inverse") {
            os << "inverse " << name << " = " << join_exprs(inverses.at(name));
        } else if (kw == "domain") {
            os << "domain " << name << " = ";
            const auto& d = domains.at(name);
            for (std::size_t i = 0; i < d.size(); ++i) os << (i ? ", " : "") << shortest(d[i]);
        } else if (kw == "expect") {
            const auto& e = expectations.at(std::stoul(name));
            switch (e.kind) {
                case Expectation::Kind::Flow:
                    os << "expect flow " << e.subject << " " << e.other << " = [" << join_exprs(e.values) << "]";
                    break;
                case Expectation::Kind::Invariants:
                    os << "expect invariants " << e.subject << " = [" << join_exprs(e.values) << "]";
                    break;
                case Expectation::Kind::Match:
                    os << "expect match " << e.subject << (e.other.empty() ? "" : " " + e.other) << " = " << e.family;
                    for (const auto& side : e.params) {
                        os << " [";
                        bool first = true;
                        for (const auto& [k, v] : side) {
                            os << (first ? "" : ", ") << k << " = " << v.str();
                            first = false;
                        }
                        os << "]";
                    }
                    break;
            }
        }
        os << "\n";
    }
    return os.str();
}

Document parse(std::string_view source) {
    TokenStream ts(text::tokenize(source));
    Document doc;
    Parser(ts, doc).run();
    return doc;
}

Document load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputUnreadable("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace hamtrio::doc
