#include "nuexpr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "nuexpr/errors.hpp"

namespace nuexpr {

ExprPtr make_var(std::string name) {
    if (name.empty())
        throw Error("empty variable name");
    return std::make_shared<const Expr>(Expr{VarExpr{std::move(name)}});
}

ExprPtr make_nu(std::string var, ExprPtr body) {
    if (var.empty())
        throw Error("empty variable name");
    if (!body)
        throw Error("null fixpoint body");
    return std::make_shared<const Expr>(Expr{NuExpr{std::move(var), std::move(body)}});
}

ExprPtr make_modal(Modality op, std::vector<ExprPtr> args) {
    if (static_cast<size_t>(op.arity()) != args.size())
        throw Error("modality " + op.to_string() + " expects " + std::to_string(op.arity()) +
                    " arguments, got " + std::to_string(args.size()));
    for (const auto& a : args)
        if (!a)
            throw Error("null modality argument");
    return std::make_shared<const Expr>(Expr{ModalExpr{std::move(op), std::move(args)}});
}

namespace {

using FreeVarCache = std::unordered_map<const Expr*, std::set<std::string>>;

const std::set<std::string>& free_vars_cached(const ExprPtr& e, FreeVarCache& cache) {
    auto it = cache.find(e.get());
    if (it != cache.end())
        return it->second;
    std::set<std::string> out;
    if (const auto* v = e->as_var()) {
        out.insert(v->name);
    } else if (const auto* nu = e->as_nu()) {
        out = free_vars_cached(nu->body, cache);
        out.erase(nu->var);
    } else {
        for (const auto& a : e->as_modal()->args) {
            const auto& sub = free_vars_cached(a, cache);
            out.insert(sub.begin(), sub.end());
        }
    }
    return cache.emplace(e.get(), std::move(out)).first->second;
}

} // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
    FreeVarCache cache;
    return free_vars_cached(e, cache);
}

const std::set<std::string>& FreeVarTable::operator()(const ExprPtr& e) {
    return free_vars_cached(e, cache_);
}

namespace {

void check_wellformed_walk(const ExprPtr& e, std::map<std::string, bool>& guarded_env,
                           Wellformedness& result) {
    if (!result.ok())
        return;
    if (const auto* v = e->as_var()) {
        auto it = guarded_env.find(v->name);
        if (it == guarded_env.end()) {
            result.closed = false;
            result.diagnostic = "free variable '" + v->name + "'";
        } else if (!it->second) {
            result.guarded = false;
            result.diagnostic = "unguarded occurrence of '" + v->name + "'";
        }
        return;
    }
    if (const auto* nu = e->as_nu()) {
        auto saved = guarded_env.find(nu->var) == guarded_env.end()
                         ? std::optional<bool>()
                         : std::optional<bool>(guarded_env[nu->var]);
        guarded_env[nu->var] = false;
        check_wellformed_walk(nu->body, guarded_env, result);
        if (saved)
            guarded_env[nu->var] = *saved;
        else
            guarded_env.erase(nu->var);
        return;
    }
    const auto* m = e->as_modal();
    auto inner = guarded_env;
    for (auto& [var, flag] : inner) {
        (void)var;
        flag = true;
    }
    for (const auto& a : m->args)
        check_wellformed_walk(a, inner, result);
}

} // namespace

Wellformedness check_wellformed(const ExprPtr& e) {
    Wellformedness result;
    std::map<std::string, bool> env;
    check_wellformed_walk(e, env, result);
    return result;
}

namespace {

void alpha_key_walk(const ExprPtr& e, std::vector<std::string>& binders, std::string& out) {
    if (const auto* v = e->as_var()) {
        for (int i = static_cast<int>(binders.size()) - 1; i >= 0; --i)
            if (binders[i] == v->name) {
                out += "b" + std::to_string(static_cast<int>(binders.size()) - 1 - i);
                return;
            }
        out += "f:" + v->name + ";";
        return;
    }
    if (const auto* nu = e->as_nu()) {
        out += "n(";
        binders.push_back(nu->var);
        alpha_key_walk(nu->body, binders, out);
        binders.pop_back();
        out += ")";
        return;
    }
    const auto* m = e->as_modal();
    out += "m" + std::to_string(static_cast<int>(m->op.functor())) + m->op.to_string() + "/" +
           std::to_string(m->op.arity()) + "(";
    for (size_t i = 0; i < m->args.size(); ++i) {
        if (i)
            out += ",";
        alpha_key_walk(m->args[i], binders, out);
    }
    out += ")";
}

} // namespace

std::string alpha_key(const ExprPtr& e) {
    std::string out;
    std::vector<std::string> binders;
    alpha_key_walk(e, binders, out);
    return out;
}

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
    return alpha_key(a) == alpha_key(b);
}

namespace {

ExprPtr canonicalize_walk(const ExprPtr& e, std::map<std::string, std::string>& renaming,
                          const std::set<std::string>& taken, int& counter) {
    if (const auto* v = e->as_var()) {
        auto it = renaming.find(v->name);
        return it == renaming.end() ? e : make_var(it->second);
    }
    if (const auto* nu = e->as_nu()) {
        std::string fresh;
        do {
            fresh = "v" + std::to_string(counter++);
        } while (taken.count(fresh));
        auto saved = renaming.find(nu->var) == renaming.end()
                         ? std::optional<std::string>()
                         : std::optional<std::string>(renaming[nu->var]);
        renaming[nu->var] = fresh;
        auto body = canonicalize_walk(nu->body, renaming, taken, counter);
        if (saved)
            renaming[nu->var] = *saved;
        else
            renaming.erase(nu->var);
        return make_nu(fresh, std::move(body));
    }
    const auto* m = e->as_modal();
    std::vector<ExprPtr> args;
    for (const auto& a : m->args)
        args.push_back(canonicalize_walk(a, renaming, taken, counter));
    return make_modal(m->op, std::move(args));
}

} // namespace

ExprPtr alpha_canonicalize(const ExprPtr& e) {
    std::map<std::string, std::string> renaming;
    std::set<std::string> taken = free_vars(e);
    int counter = 0;
    return canonicalize_walk(e, renaming, taken, counter);
}

namespace {

struct SubstContext {
    const std::string& var;
    const ExprPtr& replacement;
    FreeVarCache fv_cache;
    std::unordered_map<const Expr*, ExprPtr> memo;
    const std::set<std::string>* repl_free = nullptr;
};

ExprPtr substitute_walk(const ExprPtr& e, SubstContext& ctx) {
    if (!free_vars_cached(e, ctx.fv_cache).count(ctx.var))
        return e;
    auto memoed = ctx.memo.find(e.get());
    if (memoed != ctx.memo.end())
        return memoed->second;

    ExprPtr result;
    if (e->as_var()) {
        result = ctx.replacement;
    } else if (const auto* nu = e->as_nu()) {
        // var is free in e, so nu->var != var
        if (ctx.repl_free->count(nu->var)) {
            // rename the binder away from the replacement's free variables
            std::string fresh = nu->var;
            const auto& body_free = free_vars_cached(nu->body, ctx.fv_cache);
            do {
                fresh += "'";
            } while (ctx.repl_free->count(fresh) || body_free.count(fresh) || fresh == ctx.var);
            auto renamed = substitute(nu->body, nu->var, make_var(fresh));
            result = make_nu(fresh, substitute_walk(renamed, ctx));
        } else {
            result = make_nu(nu->var, substitute_walk(nu->body, ctx));
        }
    } else {
        const auto* m = e->as_modal();
        std::vector<ExprPtr> args;
        for (const auto& a : m->args)
            args.push_back(substitute_walk(a, ctx));
        result = make_modal(m->op, std::move(args));
    }
    ctx.memo.emplace(e.get(), result);
    return result;
}

} // namespace

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
    SubstContext ctx{var, replacement, {}, {}, nullptr};
    auto repl_free = free_vars(replacement);
    ctx.repl_free = &repl_free;
    return substitute_walk(e, ctx);
}

ExprPtr unfold(const ExprPtr& e) {
    const auto* nu = e->as_nu();
    if (!nu)
        throw Error("unfold applies only to fixpoint expressions");
    return substitute(nu->body, nu->var, e);
}

std::vector<ExprPtr> fischer_ladner_closure(const ExprPtr& e) {
    std::vector<ExprPtr> members;
    std::unordered_set<std::string> seen;
    std::deque<ExprPtr> queue;

    auto push = [&](const ExprPtr& candidate) {
        auto canon = alpha_canonicalize(candidate);
        if (seen.insert(alpha_key(canon)).second)
            queue.push_back(std::move(canon));
    };

    push(e);
    while (!queue.empty()) {
        auto current = queue.front();
        queue.pop_front();
        members.push_back(current);
        if (members.size() > 100000)
            throw Error("closure did not stabilize (expression not admissible?)");
        if (current->as_nu()) {
            push(unfold(current));
        } else if (const auto* m = current->as_modal()) {
            for (const auto& a : m->args)
                push(a);
        }
    }
    return members;
}

std::string print_expr(const ExprPtr& e) {
    if (const auto* v = e->as_var())
        return v->name;
    if (const auto* nu = e->as_nu())
        return "nu " + nu->var + ". " + print_expr(nu->body);
    const auto* m = e->as_modal();
    std::string out = m->op.to_string();
    if (!m->args.empty()) {
        out += "(";
        for (size_t i = 0; i < m->args.size(); ++i) {
            if (i)
                out += ", ";
            out += print_expr(m->args[i]);
        }
        out += ")";
    }
    return out;
}

// --- parser ------------------------------------------------------------

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                column_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++column_;
            } else {
                break;
            }
        }
        current_ = Token{Token::End, "", line_, column_};
        if (pos_ >= text_.size())
            return;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '\''))
                consume_char();
            current_.kind = Token::Ident;
            current_.text = text_.substr(start, pos_ - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                consume_char();
            current_.kind = Token::Number;
            current_.text = text_.substr(start, pos_ - start);
        } else if (std::string(".,()[]/").find(c) != std::string::npos) {
            current_.kind = Token::Punct;
            current_.text = std::string(1, c);
            consume_char();
        } else {
            throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
        }
    }

    void consume_char() {
        if (current_.text.empty()) {
            current_.line = line_;
            current_.column = column_;
        }
        ++pos_;
        ++column_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, const FunctorConfig& config) : lexer_(text), config_(config) {}

    ExprPtr parse() {
        auto e = expression();
        const Token& t = lexer_.peek();
        if (t.kind != Token::End)
            throw ParseError(t.line, t.column, "unexpected trailing input '" + t.text + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& message) {
        throw ParseError(t.line, t.column, message);
    }

    Token expect_punct(const std::string& text) {
        Token t = lexer_.take();
        if (t.kind != Token::Punct || t.text != text)
            fail(t, "expected '" + text + "'" +
                        (t.kind == Token::End ? ", got end of input" : ", got '" + t.text + "'"));
        return t;
    }

    bool peek_punct(const std::string& text) {
        const Token& t = lexer_.peek();
        return t.kind == Token::Punct && t.text == text;
    }

    ExprPtr expression() {
        const Token& t = lexer_.peek();
        if (t.kind == Token::Ident && t.text == "nu") {
            lexer_.take();
            Token name = lexer_.take();
            if (name.kind != Token::Ident || name.text == "nu")
                fail(name, "expected variable name after 'nu'");
            expect_punct(".");
            return make_nu(name.text, expression());
        }
        if (t.kind == Token::Ident)
            return make_var(lexer_.take().text);
        if (t.kind == Token::Punct && t.text == "[")
            return modal();
        fail(t, t.kind == Token::End ? "unexpected end of input"
                                     : "expected expression, got '" + t.text + "'");
    }

    ExprPtr modal() {
        Token open = expect_punct("[");
        Modality op = payload(open);
        std::vector<ExprPtr> args;
        if (peek_punct("(")) {
            expect_punct("(");
            if (!peek_punct(")")) {
                args.push_back(expression());
                while (peek_punct(",")) {
                    expect_punct(",");
                    args.push_back(expression());
                }
            }
            expect_punct(")");
        }
        if (static_cast<int>(args.size()) != op.arity())
            fail(open, "modality " + op.to_string() + " expects " + std::to_string(op.arity()) +
                           " arguments, got " + std::to_string(args.size()));
        return make_modal(std::move(op), std::move(args));
    }

    Modality payload(const Token& open) {
        try {
            switch (config_.functor) {
            case Functor::Dfa: {
                Token bit = lexer_.take();
                if (bit.kind != Token::Number || (bit.text != "0" && bit.text != "1"))
                    fail(bit, "expected output bit 0 or 1");
                expect_punct("]");
                return Modality::dfa(bit.text == "1" ? 1 : 0,
                                     static_cast<int>(config_.alphabet.size()));
            }
            case Functor::Lts: {
                std::vector<std::string> labels;
                if (!peek_punct("]")) {
                    labels.push_back(label_token());
                    while (peek_punct(",")) {
                        expect_punct(",");
                        labels.push_back(label_token());
                    }
                }
                expect_punct("]");
                return Modality::lts(std::move(labels));
            }
            case Functor::Dist: {
                std::vector<Rational> weights;
                if (!peek_punct("]")) {
                    weights.push_back(rational_token());
                    while (peek_punct(",")) {
                        expect_punct(",");
                        weights.push_back(rational_token());
                    }
                }
                expect_punct("]");
                return Modality::dist(std::move(weights));
            }
            case Functor::Mon: {
                std::vector<int> sizes;
                if (!peek_punct("]")) {
                    sizes.push_back(size_token());
                    while (peek_punct(",")) {
                        expect_punct(",");
                        sizes.push_back(size_token());
                    }
                }
                expect_punct("]");
                return Modality::mon(std::move(sizes));
            }
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            fail(open, err.what());
        }
        fail(open, "corrupt functor tag");
    }

    std::string label_token() {
        Token t = lexer_.take();
        if (t.kind != Token::Ident && t.kind != Token::Number)
            fail(t, "expected transition label");
        return t.text;
    }

    Rational rational_token() {
        Token num = lexer_.take();
        if (num.kind != Token::Number)
            fail(num, "expected probability");
        std::string text = num.text;
        if (peek_punct("/")) {
            expect_punct("/");
            Token den = lexer_.take();
            if (den.kind != Token::Number)
                fail(den, "expected denominator");
            text += "/" + den.text;
        }
        try {
            return parse_rational(text);
        } catch (const Error& err) {
            fail(num, err.what());
        }
    }

    int size_token() {
        Token t = lexer_.take();
        if (t.kind != Token::Number)
            fail(t, "expected group size");
        return std::stoi(t.text);
    }

    Lexer lexer_;
    const FunctorConfig& config_;
};

} // namespace

ExprPtr parse_expr(const std::string& text, const FunctorConfig& config) {
    return Parser(text, config).parse();
}

} // namespace nuexpr
