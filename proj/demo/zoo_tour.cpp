// Builds every registered model, prints its size against the reported
// challenge figure, and runs one randomly initialized forward pass on a
// synthetic LR image.

#include <chrono>
#include <cstdio>

#include "srzoo/srzoo.hpp"

int main() {
    using namespace srzoo;
    const Tensor hr = synthetic_image(64, 64, 7);
    const Tensor lr = mul(degrade_bicubic_x4(hr), 1.0f / 255.0f);

    std::printf("%-14s %-14s %12s %12s %8s %6s %9s %8s\n", "model", "team", "params", "reported", "delta", "rf",
                "psnr", "ms");
    for (const ModelInfo& m : model_registry()) {
        const Graph g = build_model(m.id);
        const WeightStore w = init_weights(g, 1, InitScheme::parse("kaiming_uniform"));
        const std::int64_t params = count_params(g).total;
        const ReceptiveField rf = receptive_field(g);

        const auto t0 = std::chrono::steady_clock::now();
        const Tensor sr = mul(forward(g, w, lr), 255.0f);
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - t0;

        char rf_text[16];
        std::snprintf(rf_text, sizeof rf_text, rf.global ? "global" : "%lld", static_cast<long long>(rf.size));
        std::printf("%-14s %-14s %12lld %12lld %+7.2f%% %6s %9s %8.1f\n", m.id.c_str(), m.team.c_str(),
                    static_cast<long long>(params), static_cast<long long>(m.reported_params),
                    reported_delta_pct(m, params), rf_text, psnr(sr, hr).str().c_str(), ms.count());
    }
    return 0;
}
