#include "wavemap/odeint.hpp"

#include "wavemap/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace wavemap::odeint {
namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner, DOP853).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

class Stepper {
 public:
  explicit Stepper(const IVPSpec& spec)
      : spec_(spec), n_(spec.initial_state.size()) {
    for (auto* k : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &k8, &k9, &k10, &tmp, &y}) k->assign(n_, 0.0);
  }

  void eval(double t, const State& in, State& out) {
    spec_.rhs(t, in, out);
    ++evaluations;
  }

  // Twelve-stage step from (t, y) with size h; result in k5, propagated
  // derivative combination in k4.
  void step(double t, double h) {
    auto lin = [&](auto&& f) {
      for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * f(i);
    };
    lin([&](std::size_t i) { return a21 * k1[i]; });
    eval(t + c2 * h, tmp, k2);
    lin([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    eval(t + c3 * h, tmp, k3);
    lin([&](std::size_t i) { return a41 * k1[i] + a43 * k3[i]; });
    eval(t + c4 * h, tmp, k4);
    lin([&](std::size_t i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
    eval(t + c5 * h, tmp, k5);
    lin([&](std::size_t i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
    eval(t + c6 * h, tmp, k6);
    lin([&](std::size_t i) { return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]; });
    eval(t + c7 * h, tmp, k7);
    lin([&](std::size_t i) {
      return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
    });
    eval(t + c8 * h, tmp, k8);
    lin([&](std::size_t i) {
      return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
    });
    eval(t + c9 * h, tmp, k9);
    lin([&](std::size_t i) {
      return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
             a108 * k8[i] + a109 * k9[i];
    });
    eval(t + c10 * h, tmp, k10);
    lin([&](std::size_t i) {
      return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
             a118 * k8[i] + a119 * k9[i] + a1110 * k10[i];
    });
    eval(t + c11 * h, tmp, k2);
    lin([&](std::size_t i) {
      return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
             a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i];
    });
    eval(t + h, tmp, k3);
    for (std::size_t i = 0; i < n_; ++i) {
      k4[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
              b11 * k2[i] + b12 * k3[i];
      k5[i] = y[i] + h * k4[i];
    }
  }

  double error_norm(double h) const {
    double err = 0.0, err2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk =
          1.0 / (spec_.abs_tol + spec_.rel_tol * std::max(std::abs(y[i]), std::abs(k5[i])));
      double e = (k4[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k3[i]) * sk;
      err2 += e * e;
      e = (er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
           er11 * k2[i] + er12 * k3[i]) *
          sk;
      err += e * e;
    }
    double deno = err + 0.01 * err2;
    if (deno <= 0.0) deno = 1.0;
    return std::abs(h) * err * std::sqrt(1.0 / (deno * static_cast<double>(n_)));
  }

  // Requires k4 = f(t + h, k5). Appends 8 x n interpolation coefficients.
  void dense_coefficients(double t, double h, std::vector<double>& out) {
    std::vector<double> rc(8 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = k5[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      rc[i] = y[i];
      rc[n_ + i] = ydiff;
      rc[2 * n_ + i] = bspl;
      rc[3 * n_ + i] = ydiff - h * k4[i] - bspl;
      rc[4 * n_ + i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] +
                       d410 * k10[i] + d411 * k2[i] + d412 * k3[i];
      rc[5 * n_ + i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] +
                       d510 * k10[i] + d511 * k2[i] + d512 * k3[i];
      rc[6 * n_ + i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] +
                       d610 * k10[i] + d611 * k2[i] + d612 * k3[i];
      rc[7 * n_ + i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] +
                       d710 * k10[i] + d711 * k2[i] + d712 * k3[i];
    }
    for (std::size_t i = 0; i < n_; ++i) {
      tmp[i] = y[i] + h * (a141 * k1[i] + a147 * k7[i] + a148 * k8[i] + a149 * k9[i] +
                           a1410 * k10[i] + a1411 * k2[i] + a1412 * k3[i] + a1413 * k4[i]);
    }
    eval(t + c14 * h, tmp, k10);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp[i] = y[i] + h * (a151 * k1[i] + a156 * k6[i] + a157 * k7[i] + a158 * k8[i] +
                           a1511 * k2[i] + a1512 * k3[i] + a1513 * k4[i] + a1514 * k10[i]);
    }
    eval(t + c15 * h, tmp, k2);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp[i] = y[i] + h * (a161 * k1[i] + a166 * k6[i] + a167 * k7[i] + a168 * k8[i] +
                           a169 * k9[i] + a1613 * k4[i] + a1614 * k10[i] + a1615 * k2[i]);
    }
    eval(t + c16 * h, tmp, k3);
    for (std::size_t i = 0; i < n_; ++i) {
      rc[4 * n_ + i] = h * (rc[4 * n_ + i] + d413 * k4[i] + d414 * k10[i] + d415 * k2[i] + d416 * k3[i]);
      rc[5 * n_ + i] = h * (rc[5 * n_ + i] + d513 * k4[i] + d514 * k10[i] + d515 * k2[i] + d516 * k3[i]);
      rc[6 * n_ + i] = h * (rc[6 * n_ + i] + d613 * k4[i] + d614 * k10[i] + d615 * k2[i] + d616 * k3[i]);
      rc[7 * n_ + i] = h * (rc[7 * n_ + i] + d713 * k4[i] + d714 * k10[i] + d715 * k2[i] + d716 * k3[i]);
    }
    out.insert(out.end(), rc.begin(), rc.end());
  }

  double initial_step(double t, double hmax, double dir) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = spec_.abs_tol + spec_.rel_tol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax) * dir;
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * k1[i];
    eval(t + h, tmp, k2);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double s = (k2[i] - k1[i]) / (spec_.abs_tol + spec_.rel_tol * std::abs(y[i]));
      der2 += s * s;
    }
    der2 = std::sqrt(der2) / std::abs(h);
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.125);
    return std::min({100.0 * std::abs(h), h1, hmax}) * dir;
  }

  const IVPSpec& spec_;
  std::size_t n_;
  State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, tmp, y;
  std::size_t evaluations = 0;
};

}  // namespace

std::span<const double> DenseSolution::state(std::size_t i) const {
  return std::span<const double>(states_).subspan(i * dim_, dim_);
}

bool DenseSolution::covers(double t) const {
  const double lo = std::min(mesh_.front(), mesh_.back());
  const double hi = std::max(mesh_.front(), mesh_.back());
  return t >= lo && t <= hi;
}

std::size_t DenseSolution::locate(double t) const {
  // Index k of the step [mesh_[k], mesh_[k+1]] containing t.
  const bool increasing = mesh_.back() >= mesh_.front();
  auto it = increasing ? std::upper_bound(mesh_.begin(), mesh_.end(), t)
                       : std::upper_bound(mesh_.begin(), mesh_.end(), t, std::greater<>());
  std::size_t k = static_cast<std::size_t>(std::distance(mesh_.begin(), it));
  if (k == 0) return 0;
  return std::min(k - 1, mesh_.size() - 2);
}

void DenseSolution::evaluate(double t, std::span<double> out) const {
  if (!covers(t)) {
    std::ostringstream os;
    os << "DenseSolution: t = " << t << " outside [" << mesh_.front() << ", " << mesh_.back() << "]";
    throw InvalidArgument(os.str());
  }
  if (mesh_.size() == 1) {
    std::copy_n(states_.begin(), dim_, out.begin());
    return;
  }
  const std::size_t k = locate(t);
  if (t == mesh_[k] || t == mesh_[k + 1]) {
    const auto s = state(t == mesh_[k] ? k : k + 1);
    std::copy(s.begin(), s.end(), out.begin());
    return;
  }
  if (coeffs_.empty()) throw InvalidArgument("DenseSolution: integration ran without dense output");
  const double h = mesh_[k + 1] - mesh_[k];
  const double s = (t - mesh_[k]) / h;
  const double s1 = 1.0 - s;
  const double* rc = coeffs_.data() + k * 8 * dim_;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double r1 = rc[i], r2 = rc[dim_ + i], r3 = rc[2 * dim_ + i], r4 = rc[3 * dim_ + i];
    const double r5 = rc[4 * dim_ + i], r6 = rc[5 * dim_ + i], r7 = rc[6 * dim_ + i],
                 r8 = rc[7 * dim_ + i];
    out[i] = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * (r5 + s * (r6 + s1 * (r7 + s * r8))))));
  }
}

State DenseSolution::evaluate(double t) const {
  State out(dim_);
  evaluate(t, out);
  return out;
}

double DenseSolution::evaluate(double t, std::size_t component) const {
  State out(dim_);
  evaluate(t, out);
  return out.at(component);
}

DenseSolution integrate(const IVPSpec& spec) {
  if (!spec.rhs) throw InvalidArgument("integrate: missing right-hand side");
  if (spec.initial_state.empty()) throw InvalidArgument("integrate: empty initial state");
  if (!std::isfinite(spec.t0) || !std::isfinite(spec.t1) || spec.t0 == spec.t1) {
    throw InvalidArgument("integrate: interval endpoints must be finite and distinct");
  }
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw InvalidArgument("integrate: tolerances must be positive");
  }

  Stepper st(spec);
  const std::size_t n = spec.initial_state.size();
  DenseSolution sol;
  sol.dim_ = n;
  st.y = spec.initial_state;
  sol.mesh_.push_back(spec.t0);
  sol.states_.insert(sol.states_.end(), st.y.begin(), st.y.end());

  const double dir = spec.t1 > spec.t0 ? 1.0 : -1.0;
  const double span = std::abs(spec.t1 - spec.t0);
  const double hmax = spec.max_step > 0.0 ? std::min(spec.max_step, span) : span;
  constexpr double uround = std::numeric_limits<double>::epsilon();
  constexpr double safe = 0.9, fac_lo = 1.0 / 3.0, fac_hi = 6.0;

  double t = spec.t0;
  st.eval(t, st.y, st.k1);
  double h = spec.initial_step > 0.0 ? std::min(spec.initial_step, hmax) * dir
                                     : st.initial_step(t, hmax, dir);
  double facold = 1e-4;
  bool reject = false;
  std::size_t steps = 0;

  while (true) {
    if (++steps > spec.max_steps) throw IntegrationBlowUp("integrate: step budget exhausted", t);
    if (0.1 * std::abs(h) <= std::abs(t) * uround || std::abs(h) < 1e-300) {
      throw IntegrationBlowUp("integrate: step size underflow", t);
    }
    bool last = false;
    if ((t + 1.01 * h - spec.t1) * dir > 0.0) {
      h = spec.t1 - t;
      last = true;
    }
    st.step(t, h);
    double err = st.error_norm(h);
    if (!std::isfinite(err) || !all_finite(st.k5)) {
      // Treat non-finite stages as a failed step.
      h *= 0.25;
      reject = true;
      ++sol.rejected_;
      continue;
    }
    const double fac11 = std::pow(err, 0.125);
    const double fac = std::max(1.0 / fac_hi, std::min(1.0 / fac_lo, fac11 / safe));
    double hnew = h / fac;
    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      const double tnew = last ? spec.t1 : t + h;
      st.eval(tnew, st.k5, st.k4);
      if (spec.dense_output) st.dense_coefficients(t, h, sol.coeffs_);
      st.k1 = st.k4;
      st.y = st.k5;
      t = tnew;
      sol.mesh_.push_back(t);
      sol.states_.insert(sol.states_.end(), st.y.begin(), st.y.end());
      if (spec.stop_when && spec.stop_when(t, st.y)) {
        sol.stopped_ = true;
        break;
      }
      if (last) break;
      if (std::abs(hnew) > hmax) hnew = dir * hmax;
      if (reject) hnew = dir * std::min(std::abs(hnew), std::abs(h));
      reject = false;
    } else {
      hnew = h / std::min(1.0 / fac_lo, fac11 / safe);
      reject = true;
      ++sol.rejected_;
    }
    h = hnew;
  }
  (void)facold;
  sol.evaluations_ = st.evaluations;
  return sol;
}

}  // namespace wavemap::odeint
