#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace krylov {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Group { SU2, H1, SU11, SU3 };

const char* group_name(Group g);

// Matrices are in the lowest-weight-first ordering, so row index n is the
// Krylov level with cost c_n = n.
//   SU2 labels:  J+ J- J0
//   H1 labels:   a a+ N
//   SU11 labels: K+ K- K0
//   SU3 labels:  S+12 S-12 Sz12 S+13 S-13 Sz13 S+23 S-23
struct GeneratorSet {
    Group group;
    double weight = 0.0;
    int dim = 0;
    std::map<std::string, Matrix> generators;

    const Matrix& at(const std::string& label) const;
    Matrix commutator(const std::string& x, const std::string& y) const;
    Matrix casimir() const;
};

GeneratorSet build_su2(double j);
GeneratorSet build_h1(int n_max);
GeneratorSet build_su11(double h, int n_max);
GeneratorSet build_su3_fundamental();

using CoeffFn = std::function<cplx(double)>;
using ShiftFn = std::function<double(double)>;

// H(t) = sum_X coeff_X(t) X + shift(t) I.
class HamiltonianAssembly {
public:
    HamiltonianAssembly(GeneratorSet gen, std::map<std::string, CoeffFn> coeff, ShiftFn shift,
                        bool time_independent);

    Matrix operator()(double t) const;
    int dim() const { return gen_.dim; }
    const GeneratorSet& generators() const { return gen_; }
    bool time_independent() const { return time_independent_; }
    // True when the generator set is a unitary representation (all but SU11 2x2).
    bool hermitian_expected() const { return hermitian_; }
    void set_hermitian_expected(bool h) { hermitian_ = h; }

private:
    GeneratorSet gen_;
    std::vector<std::pair<std::string, CoeffFn>> terms_;
    ShiftFn shift_;
    bool time_independent_;
    bool hermitian_ = true;
};

HamiltonianAssembly assemble(const GeneratorSet& gen, const std::map<std::string, CoeffFn>& coeff,
                             ShiftFn shift = {}, bool time_independent = false);

// Convenience for constant coefficients.
HamiltonianAssembly assemble_constant(const GeneratorSet& gen, const std::map<std::string, cplx>& coeff,
                                      double shift = 0.0);

}  // namespace krylov
