#include "hkprop/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace hkprop::fft {

namespace {

// Plans are created once per (size, sign) with FFTW_UNALIGNED so they can be
// re-executed on arbitrary caller buffers.
class PlanCache {
public:
	fftw_plan get(int n, int sign)
	{
		std::lock_guard<std::mutex> lock(mutex_);
		auto key = std::make_pair(n, sign);
		auto it = plans_.find(key);
		if (it != plans_.end()) return it->second;
		std::vector<Complex> dummy(static_cast<std::size_t>(n));
		fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(dummy.data()),
		                               reinterpret_cast<fftw_complex*>(dummy.data()), sign,
		                               FFTW_ESTIMATE | FFTW_UNALIGNED);
		plans_.emplace(key, p);
		return p;
	}

private:
	std::mutex mutex_;
	std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
	static PlanCache c;
	return c;
}

void execute(Eigen::VectorXcd& data, int sign)
{
	const int n = static_cast<int>(data.size());
	if (n == 0) return;
	fftw_plan p = cache().get(n, sign);
	auto* buf = reinterpret_cast<fftw_complex*>(data.data());
	fftw_execute_dft(p, buf, buf);
}

}  // namespace

void forward(Eigen::VectorXcd& data) { execute(data, FFTW_FORWARD); }

void inverse(Eigen::VectorXcd& data)
{
	execute(data, FFTW_BACKWARD);
	if (data.size() > 0) data /= static_cast<double>(data.size());
}

Eigen::VectorXd wavenumbers(int n, double length)
{
	Eigen::VectorXd k(n);
	const double base = 2.0 * M_PI / length;
	for (int m = 0; m < n; ++m) {
		const int mm = m <= (n - 1) / 2 ? m : m - n;
		k[m] = base * mm;
	}
	return k;
}

Eigen::VectorXcd upsample(const Eigen::VectorXcd& data, int factor)
{
	const int n = static_cast<int>(data.size());
	Eigen::VectorXcd hat = data;
	forward(hat);
	const int m = n * factor;
	Eigen::VectorXcd big = Eigen::VectorXcd::Zero(m);
	const int neg = n / 2;
	const int pos = n - neg;  // bins 0 .. pos-1 carry frequencies 0 .. pos-1
	big.head(pos) = hat.head(pos);
	big.tail(neg) = hat.tail(neg);
	// split the Nyquist bin symmetrically for even sizes
	if (n % 2 == 0) {
		big[neg] = 0.5 * hat[neg];
		big[m - neg] = 0.5 * hat[neg];
	}
	inverse(big);
	return big * static_cast<double>(factor);
}

}  // namespace hkprop::fft
