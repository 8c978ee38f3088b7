#pragma once

#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace microplan {

enum class VarKind { continuous, binary, integer };

struct MilpVar {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lb = 0.0;
    double ub = 0.0;
    double obj = 0.0;
};

/// Linear row lo <= a.x <= hi (lo == hi for equalities, +-inf for one-sided).
struct MilpRow {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
};

/// Backend-neutral mixed-integer linear model, always a minimization.
/// Row and variable names are unique and double as the (family, indices) map
/// required for post-solve extraction and adversarial objective surgery.
class MilpInstance {
  public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    int add_var(std::string name, VarKind kind, double lb, double ub, double obj = 0.0);
    int add_row(std::string name, double lo, double hi, std::vector<std::pair<int, double>> terms);
    int add_le(std::string name, std::vector<std::pair<int, double>> terms, double rhs) {
        return add_row(std::move(name), -inf, rhs, std::move(terms));
    }
    int add_ge(std::string name, std::vector<std::pair<int, double>> terms, double rhs) {
        return add_row(std::move(name), rhs, inf, std::move(terms));
    }
    int add_eq(std::string name, std::vector<std::pair<int, double>> terms, double rhs) {
        return add_row(std::move(name), rhs, rhs, std::move(terms));
    }

    void set_obj(int var, double coeff) { vars_[var].obj = coeff; }
    void add_obj(int var, double coeff) { vars_[var].obj += coeff; }
    void set_obj_offset(double v) { obj_offset_ = v; }
    double obj_offset() const { return obj_offset_; }

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const std::vector<MilpVar>& vars() const { return vars_; }
    const std::vector<MilpRow>& rows() const { return rows_; }
    const MilpVar& var(int id) const { return vars_[id]; }
    const MilpRow& row(int id) const { return rows_[id]; }

    /// Lookup by name; throws ModelError when absent.
    int var_id(const std::string& name) const;
    int row_id(const std::string& name) const;
    std::optional<int> find_var(const std::string& name) const;

    bool has_integers() const;

    double eval_objective(const std::vector<double>& values) const;
    double eval_row(int row, const std::vector<double>& values) const;

    /// Checks that every row references declared variables and that the name
    /// map is total; throws ModelError otherwise.
    void check_consistency() const;

    /// Deterministic text export in CPLEX-LP style for solver-independent
    /// inspection (ranged rows split into _lo/_hi inequalities).
    void write_lp(std::ostream& os) const;

  private:
    std::vector<MilpVar> vars_;
    std::vector<MilpRow> rows_;
    std::unordered_map<std::string, int> var_names_;
    std::unordered_map<std::string, int> row_names_;
    double obj_offset_ = 0.0;
};

/// "family(i,j,k)" name builder used by every model writer.
std::string key(const char* family, std::initializer_list<long long> idx);

}  // namespace microplan
