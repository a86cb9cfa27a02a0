#include "hamtrio/diffop.hpp"

#include <sstream>

#include "hamtrio/errors.hpp"
#include "hamtrio/linalg.hpp"

namespace hamtrio::op {

using jet::total_derivative;
using jet::vanishes;

namespace {

Expr binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Expr(jet::Rational(r));
}

bool is_differential(jet::VarId v) { return jet::Vars::is_jet(v) || jet::Vars::is_covector(v); }

}  // namespace

ScalarDiffOp::ScalarDiffOp(Expr a) { add(0, a); }

ScalarDiffOp ScalarDiffOp::D(int k) { return term(Expr(1), k); }

ScalarDiffOp ScalarDiffOp::term(Expr a, int k) {
    ScalarDiffOp r;
    r.add(k, a);
    return r;
}

void ScalarDiffOp::add(int k, const Expr& a) {
    if (a.is_zero()) return;
    auto it = coef_.find(k);
    if (it == coef_.end()) {
        coef_.emplace(k, a);
        return;
    }
    it->second += a;
    if (it->second.is_zero()) coef_.erase(it);
}

Expr ScalarDiffOp::coeff(int k) const {
    auto it = coef_.find(k);
    return it == coef_.end() ? Expr() : it->second;
}

ScalarDiffOp operator+(const ScalarDiffOp& a, const ScalarDiffOp& b) {
    ScalarDiffOp r = a;
    for (const auto& [k, c] : b.coef_) r.add(k, c);
    return r;
}

ScalarDiffOp ScalarDiffOp::operator-() const {
    ScalarDiffOp r;
    for (const auto& [k, c] : coef_) r.coef_.emplace(k, -c);
    return r;
}

ScalarDiffOp operator-(const ScalarDiffOp& a, const ScalarDiffOp& b) { return a + (-b); }

ScalarDiffOp operator*(const Expr& c, const ScalarDiffOp& a) {
    ScalarDiffOp r;
    if (c.is_zero()) return r;
    for (const auto& [k, x] : a.coef_) r.add(k, c * x);
    return r;
}

ScalarDiffOp ScalarDiffOp::compose(const ScalarDiffOp& b, const JetContext& ctx) const {
    std::map<int, std::vector<Expr>> acc;
    for (const auto& [n, bn] : b.coef_) {
        int top = coef_.empty() ? 0 : coef_.rbegin()->first;
        // derivatives D^j(b_n), computed once
        std::vector<Expr> db{bn};
        for (int j = 1; j <= top; ++j) db.push_back(db.back().is_zero() ? Expr() : total_derivative(db.back(), ctx));
        for (const auto& [k, ak] : coef_)
            for (int j = 0; j <= k; ++j)
                if (!db[j].is_zero()) acc[k - j + n].push_back(binomial(k, j) * ak * db[j]);
    }
    ScalarDiffOp r;
    for (auto& [p, parts] : acc) r.add(p, jet::sum(parts));
    return r;
}

ScalarDiffOp compose(const ScalarDiffOp& a, const ScalarDiffOp& b, const JetContext& ctx) { return a.compose(b, ctx); }

ScalarDiffOp ScalarDiffOp::adjoint(const JetContext& ctx) const {
    // (a_k D^k)^dagger = (-1)^k sum_j C(k,j) D^(k-j)(a_k) D^j
    std::map<int, std::vector<Expr>> acc;
    for (const auto& [k, ak] : coef_) {
        Expr d = ak;
        Expr sign = (k % 2 == 0) ? Expr(1) : Expr(-1);
        for (int i = 0; i <= k; ++i) {  // i = k - j derivatives taken
            if (d.is_zero()) break;
            acc[k - i].push_back(sign * binomial(k, i) * d);
            if (i < k) d = total_derivative(d, ctx);
        }
    }
    ScalarDiffOp r;
    for (auto& [p, parts] : acc) r.add(p, jet::sum(parts));
    return r;
}

Expr ScalarDiffOp::apply(const Expr& f, const JetContext& ctx) const {
    std::vector<Expr> parts;
    Expr d = f;
    int k = 0;
    for (const auto& [p, a] : coef_) {
        while (k < p) {
            d = total_derivative(d, ctx);
            ++k;
        }
        parts.push_back(a * d);
    }
    return jet::sum(parts);
}

ScalarDiffOp ScalarDiffOp::map_coefficients(const std::function<Expr(const Expr&)>& fn) const {
    ScalarDiffOp r;
    for (const auto& [k, a] : coef_) r.add(k, fn(a));
    return r;
}

std::string ScalarDiffOp::str() const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        const auto& [k, a] = *it;
        std::string c = a.str();
        bool simple = a.num().size() == 1 && a.den().is_constant();
        if (k == 0) {
            os << (simple ? c : "(" + c + ")");
            continue;
        }
        if (!(a == Expr(1))) os << (simple ? c : "(" + c + ")") << "*";
        os << "Dx";
        if (k > 1) os << "^" << k;
    }
    return os.str();
}

MatrixDiffOp MatrixDiffOp::identity(int m, const ScalarDiffOp& diag) {
    MatrixDiffOp r(m);
    for (int i = 0; i < m; ++i) r.at(i, i) = diag;
    return r;
}

MatrixDiffOp MatrixDiffOp::from_rows(const std::vector<std::vector<ScalarDiffOp>>& rows) {
    const int m = static_cast<int>(rows.size());
    MatrixDiffOp r(m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rows[i].size()) != m)
            throw DimensionMismatch("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                    " entries, expected " + std::to_string(m));
        for (int j = 0; j < m; ++j) r.at(i, j) = rows[i][j];
    }
    return r;
}

MatrixDiffOp MatrixDiffOp::multiplication(const std::vector<std::vector<Expr>>& a) {
    std::vector<std::vector<ScalarDiffOp>> rows;
    for (const auto& row : a) {
        rows.emplace_back();
        for (const auto& x : row) rows.back().emplace_back(x);
    }
    return from_rows(rows);
}

int MatrixDiffOp::order() const {
    int o = -1;
    for (const auto& s : e_) o = std::max(o, s.order());
    return o;
}

bool MatrixDiffOp::is_zero() const {
    for (const auto& s : e_)
        if (!s.is_zero()) return false;
    return true;
}

namespace {
void require_same(const MatrixDiffOp& a, const MatrixDiffOp& b) {
    if (a.size() != b.size())
        throw DimensionMismatch(std::to_string(a.size()) + "x" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + "x" + std::to_string(b.size()));
}
}  // namespace

MatrixDiffOp operator+(const MatrixDiffOp& a, const MatrixDiffOp& b) {
    require_same(a, b);
    MatrixDiffOp r(a.m_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
    return r;
}

MatrixDiffOp MatrixDiffOp::operator-() const {
    MatrixDiffOp r(m_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
    return r;
}

MatrixDiffOp operator-(const MatrixDiffOp& a, const MatrixDiffOp& b) { return a + (-b); }

MatrixDiffOp operator*(const Expr& c, const MatrixDiffOp& a) {
    MatrixDiffOp r(a.m_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = c * a.e_[i];
    return r;
}

bool operator==(const MatrixDiffOp& a, const MatrixDiffOp& b) { return a.m_ == b.m_ && a.e_ == b.e_; }

MatrixDiffOp MatrixDiffOp::compose(const MatrixDiffOp& b, const JetContext& ctx) const {
    require_same(*this, b);
    MatrixDiffOp r(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
            ScalarDiffOp s;
            for (int k = 0; k < m_; ++k) {
                if (at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                s = s + at(i, k).compose(b.at(k, j), ctx);
            }
            r.at(i, j) = s;
        }
    return r;
}

MatrixDiffOp MatrixDiffOp::adjoint(const JetContext& ctx) const {
    MatrixDiffOp r(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) r.at(i, j) = at(j, i).adjoint(ctx);
    return r;
}

std::vector<Expr> MatrixDiffOp::apply(const std::vector<Expr>& psi, const JetContext& ctx) const {
    if (static_cast<int>(psi.size()) != m_)
        throw DimensionMismatch("vector of length " + std::to_string(psi.size()) + " for a " + std::to_string(m_) +
                                "x" + std::to_string(m_) + " operator");
    std::vector<Expr> out;
    for (int i = 0; i < m_; ++i) {
        std::vector<Expr> parts;
        for (int j = 0; j < m_; ++j)
            if (!at(i, j).is_zero()) parts.push_back(at(i, j).apply(psi[j], ctx));
        out.push_back(jet::sum(parts));
    }
    return out;
}

MatrixDiffOp MatrixDiffOp::map_coefficients(const std::function<Expr(const Expr&)>& fn) const {
    MatrixDiffOp r(m_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].map_coefficients(fn);
    return r;
}

MatrixDiffOp MatrixDiffOp::substitute(const jet::Substitution& s) const {
    return map_coefficients([&](const Expr& e) { return e.substitute(s); });
}

std::vector<std::vector<Expr>> MatrixDiffOp::coefficient_matrix(int k) const {
    std::vector<std::vector<Expr>> a(m_, std::vector<Expr>(m_));
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) a[i][j] = at(i, j).coeff(k);
    return a;
}

std::string MatrixDiffOp::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < m_; ++j) os << (j ? ", " : "") << at(i, j).str();
        os << "]";
    }
    os << "]";
    return os.str();
}

MatrixDiffOp compose(const MatrixDiffOp& a, const MatrixDiffOp& b, const JetContext& ctx) { return a.compose(b, ctx); }
MatrixDiffOp adjoint(const MatrixDiffOp& p, const JetContext& ctx) { return p.adjoint(ctx); }
std::vector<Expr> apply(const MatrixDiffOp& p, const std::vector<Expr>& psi, const JetContext& ctx) {
    return p.apply(psi, ctx);
}

bool is_skew_adjoint(const MatrixDiffOp& p, const JetContext& ctx) {
    MatrixDiffOp s = p + p.adjoint(ctx);
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < p.size(); ++j)
            for (const auto& [k, c] : s.at(i, j).coefficients())
                if (!vanishes(c)) return false;
    return true;
}

std::optional<Expr> equal_up_to_scale(const MatrixDiffOp& a, const MatrixDiffOp& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::optional<Expr> kappa;
    for (int i = 0; i < a.size() && !kappa; ++i)
        for (int j = 0; j < a.size() && !kappa; ++j)
            for (const auto& [k, c] : b.at(i, j).coefficients()) {
                kappa = a.at(i, j).coeff(k) / c;
                break;
            }
    if (!kappa) return a.is_zero() ? std::optional<Expr>(Expr(1)) : std::nullopt;
    if (kappa->is_zero() || kappa->depends_on_if(is_differential)) return std::nullopt;
    MatrixDiffOp diff = a - (*kappa) * b;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j)
            for (const auto& [k, c] : diff.at(i, j).coefficients())
                if (!vanishes(c)) return std::nullopt;
    return kappa;
}

jet::VarId eps_var() {
    static const jet::VarId v = jet::Vars::param("eps");
    return v;
}

jet::VarId lambda_var() {
    static const jet::VarId v = jet::Vars::param("lambda");
    return v;
}

MatrixDiffOp Pencil::combined() const { return side2 - Expr::var(lambda_var()) * side1; }

Pencil Pencil::from_operator(const MatrixDiffOp& pi) {
    const jet::VarId lam = lambda_var();
    auto part = [&](unsigned power) {
        return pi.map_coefficients([&](const Expr& c) {
            if (c.den().contains(lam) || c.degree_in(lam) > 1) throw NotGraded("pencil is not linear in lambda: " + c.str());
            return c.coefficient(lam, power);
        });
    };
    return Pencil{part(0), -part(1)};
}

GradedCoefficients::Matrix GradedCoefficients::at(int side, int k, int l) const {
    auto it = table_.find({side, k, l});
    if (it != table_.end()) return it->second;
    return Matrix(m_, std::vector<Expr>(m_));
}

int GradedCoefficients::max_order() const {
    int k = -1;
    for (const auto& [key, a] : table_) k = std::max(k, std::get<1>(key));
    return k;
}

Pencil GradedCoefficients::reassemble() const {
    MatrixDiffOp sides[2] = {MatrixDiffOp(m_), MatrixDiffOp(m_)};
    const Expr eps = Expr::var(eps_var());
    for (const auto& [key, a] : table_) {
        auto [side, k, l] = key;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                sides[side - 1].at(i, j) = sides[side - 1].at(i, j) + ScalarDiffOp::term(eps.pow(k) * a[i][j], k - l + 1);
    }
    return Pencil{sides[1], sides[0]};
}

GradedCoefficients extract_graded(const Pencil& pencil) {
    const int m = pencil.side2.size();
    GradedCoefficients out(m);
    const jet::VarId eps = eps_var();
    const MatrixDiffOp* sides[2] = {&pencil.side1, &pencil.side2};
    for (int side = 1; side <= 2; ++side) {
        const MatrixDiffOp& p = *sides[side - 1];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (const auto& [power, c] : p.at(i, j).coefficients()) {
                    if (c.den().contains(eps)) throw NotGraded("eps in a denominator: " + c.str());
                    for (unsigned k = 0; k <= c.degree_in(eps); ++k) {
                        Expr a = c.coefficient(eps, k);
                        if (a.is_zero()) continue;
                        int l = static_cast<int>(k) + 1 - power;
                        auto deg = jet::try_homogeneous_degree(a);
                        if (l < 0 || !deg || *deg != l)
                            throw NotGraded("coefficient of eps^" + std::to_string(k) + " Dx^" + std::to_string(power) +
                                            " in entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                            ") is not homogeneous of degree " + std::to_string(l) + ": " + a.str());
                        auto mat = out.at(side, static_cast<int>(k), l);
                        mat[i][j] = mat[i][j] + a;
                        out.set(side, static_cast<int>(k), l, std::move(mat));
                    }
                }
    }
    return out;
}

std::vector<std::vector<Expr>> jacobian(const std::vector<Expr>& phi, int m) {
    std::vector<std::vector<Expr>> j(phi.size(), std::vector<Expr>(m));
    for (std::size_t a = 0; a < phi.size(); ++a)
        for (int b = 0; b < m; ++b) j[a][b] = phi[a].partial(jet::Vars::jet(b + 1));
    return j;
}

namespace {

jet::Substitution pull_back_map(int max_order, const std::vector<Expr>& phi_inv, const JetContext& ctx) {
    jet::Substitution s;
    for (std::size_t a = 0; a < phi_inv.size(); ++a) {
        Expr d = phi_inv[a];
        for (int n = 0; n <= max_order; ++n) {
            if (n) d = total_derivative(d, ctx);
            s.emplace(jet::Vars::jet(static_cast<int>(a) + 1, n), d);
        }
    }
    return s;
}

int field_order(const Expr& e) {
    int o = -1;
    for (jet::VarId v : e.deep_variables())
        if (jet::Vars::is_jet(v)) o = std::max(o, jet::Vars::info(v).order);
    return o;
}

}  // namespace

Expr pull_back(const Expr& e, const std::vector<Expr>& phi_inv, const JetContext& ctx) {
    int n = field_order(e);
    if (n < 0) return e;
    return e.substitute(pull_back_map(n, phi_inv, ctx));
}

MatrixDiffOp point_transform(const MatrixDiffOp& p, const std::vector<Expr>& phi, const std::vector<Expr>& phi_inv,
                             const JetContext& ctx) {
    const int m = p.size();
    if (static_cast<int>(phi.size()) != m || static_cast<int>(phi_inv.size()) != m)
        throw DimensionMismatch("point transformation needs " + std::to_string(m) + " components");
    auto j = jacobian(phi, m);
    Expr det = linalg::determinant<Expr>(j, [](const Expr& x) { return vanishes(x); });
    if (vanishes(det)) throw SingularJacobian("Jacobian determinant vanishes identically");
    std::vector<std::vector<Expr>> jt(m, std::vector<Expr>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) jt[a][b] = j[b][a];
    MatrixDiffOp t = MatrixDiffOp::multiplication(j).compose(p, ctx).compose(MatrixDiffOp::multiplication(jt), ctx);
    int n = -1;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (const auto& [k, c] : t.at(a, b).coefficients()) n = std::max(n, field_order(c));
    if (n < 0) return t;
    auto s = pull_back_map(n, phi_inv, ctx);
    return t.substitute(s);
}

}  // namespace hamtrio::op
