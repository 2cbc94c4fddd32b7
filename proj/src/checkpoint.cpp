#include "rptsc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace rptsc {
namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::size_t v) {
        if (v > UINT32_MAX) {
            throw CheckpointError("value does not fit the u32 field");
        }
        le(v, 4);
    }
    void u64(std::uint64_t v) { le(v, 8); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void bytes(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void le(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    double f64() { return std::bit_cast<double>(le(8)); }
    void expect(const char* s, std::size_t n) {
        need(n);
        if (std::memcmp(in_.data() + pos_, s, n) != 0) {
            throw CheckpointError("not a checkpoint file (bad magic)");
        }
        pos_ += n;
    }
    std::vector<double> f64s(std::size_t n) {
        need(n * 8);
        std::vector<double> v(n);
        for (auto& x : v) {
            x = f64();
        }
        return v;
    }
    [[nodiscard]] bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) {
            throw CheckpointError("truncated checkpoint at byte " + std::to_string(pos_));
        }
    }
    std::uint64_t le(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
        }
        return v;
    }
    const std::vector<std::uint8_t>& in_;
    std::size_t pos_ = 0;
};

void write_record(Writer& w, std::initializer_list<std::size_t> dims,
                  std::initializer_list<const std::vector<double>*> values) {
    w.u32(dims.size());
    for (auto d : dims) {
        w.u32(d);
    }
    std::size_t count = 0;
    for (const auto* v : values) {
        count += v->size();
    }
    w.u32(count);
    for (const auto* v : values) {
        for (double x : *v) {
            w.f64(x);
        }
    }
}

void write_layer(Writer& w, const Layer& layer) {
    w.u8(static_cast<std::uint8_t>(layer.kind()));
    switch (layer.kind()) {
    case LayerKind::Conv2d: {
        const auto& c = static_cast<const Conv2dLayer&>(layer).weights();
        write_record(w, {c.out_channels, c.in_channels, c.kernel, c.kernel}, {&c.kernels, &c.bias});
        break;
    }
    case LayerKind::Dense: {
        const auto& d = static_cast<const DenseLayer&>(layer).weights();
        write_record(w, {d.fan_out, d.fan_in}, {&d.weights, &d.bias});
        break;
    }
    case LayerKind::MaxPool2: write_record(w, {2, 2}, {}); break;
    case LayerKind::Dropout: {
        const std::vector<double> rate{static_cast<const DropoutLayer&>(layer).rate()};
        write_record(w, {}, {&rate});
        break;
    }
    case LayerKind::Relu:
    case LayerKind::Flatten: write_record(w, {}, {}); break;
    }
}

std::unique_ptr<Layer> read_layer(Reader& r, std::size_t index) {
    const auto tag = r.u8();
    const std::uint32_t ndims = r.u32();
    if (ndims > 8) {
        throw CheckpointError("layer " + std::to_string(index) + " has an implausible dim count");
    }
    std::vector<std::size_t> dims(ndims);
    for (auto& d : dims) {
        d = r.u32();
    }
    const std::uint32_t count = r.u32();
    std::vector<double> values = r.f64s(count);

    auto bad = [&](const char* what) {
        return CheckpointError("layer " + std::to_string(index) + ": " + what);
    };
    switch (static_cast<LayerKind>(tag)) {
    case LayerKind::Conv2d: {
        if (dims.size() != 4 || dims[2] != dims[3]) {
            throw bad("conv record needs dims [out, in, k, k]");
        }
        ConvWeights c(dims[0], dims[1], dims[2]);
        if (values.size() != c.kernels.size() + c.bias.size()) {
            throw bad("conv parameter count does not match dims");
        }
        std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(c.kernels.size()), c.kernels.begin());
        std::copy(values.begin() + static_cast<std::ptrdiff_t>(c.kernels.size()), values.end(), c.bias.begin());
        return std::make_unique<Conv2dLayer>(std::move(c));
    }
    case LayerKind::Dense: {
        if (dims.size() != 2) {
            throw bad("dense record needs dims [fan_out, fan_in]");
        }
        DenseWeights d(dims[0], dims[1]);
        if (values.size() != d.weights.size() + d.bias.size()) {
            throw bad("dense parameter count does not match dims");
        }
        std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(d.weights.size()), d.weights.begin());
        std::copy(values.begin() + static_cast<std::ptrdiff_t>(d.weights.size()), values.end(), d.bias.begin());
        return std::make_unique<DenseLayer>(std::move(d));
    }
    case LayerKind::Relu: return std::make_unique<ReluLayer>();
    case LayerKind::MaxPool2: return std::make_unique<MaxPool2Layer>();
    case LayerKind::Flatten: return std::make_unique<FlattenLayer>();
    case LayerKind::Dropout:
        if (values.size() != 1) {
            throw bad("dropout record needs its rate");
        }
        return std::make_unique<DropoutLayer>(values[0]);
    }
    throw bad("unknown layer kind tag");
}

} // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Network& network, const OptimizerState& optimizer) {
    Writer w;
    w.bytes("RPTS", 4);
    w.u16(kCheckpointVersion);
    const Shape4& in = network.input_shape();
    w.u32(in.c);
    w.u32(in.h);
    w.u32(in.w);
    w.u32(network.layers().size());
    for (const auto& layer : network.layers()) {
        write_layer(w, *layer);
    }

    w.u8(static_cast<std::uint8_t>(optimizer.kind));
    w.f64(optimizer.learning_rate);
    w.f64(optimizer.beta1);
    w.f64(optimizer.beta2);
    w.f64(optimizer.epsilon);
    w.u64(optimizer.step);
    w.u32(optimizer.first_moment.size());
    for (std::size_t b = 0; b < optimizer.first_moment.size(); ++b) {
        const auto& m = optimizer.first_moment[b];
        const auto& v = optimizer.second_moment.at(b);
        write_record(w, {m.size()}, {&m, &v});
    }
    return w.take();
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    r.expect("RPTS", 4);
    const auto version = r.u16();
    if (version != kCheckpointVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    }
    Shape4 in{1, 0, 0, 0};
    in.c = r.u32();
    in.h = r.u32();
    in.w = r.u32();
    const std::uint32_t nlayers = r.u32();
    std::vector<std::unique_ptr<Layer>> layers;
    for (std::uint32_t i = 0; i < nlayers; ++i) {
        layers.push_back(read_layer(r, i));
    }
    // A leading conv never needs its input gradient.
    if (!layers.empty() && layers.front()->kind() == LayerKind::Conv2d) {
        static_cast<Conv2dLayer&>(*layers.front()).set_input_gradient(false);
    }

    Checkpoint cp;
    try {
        cp.network = Network(in, std::move(layers));
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(std::string("inconsistent network: ") + e.what());
    }

    const auto kind = r.u8();
    if (kind > 1) {
        throw CheckpointError("unknown optimizer kind tag");
    }
    cp.optimizer.kind = static_cast<OptimizerKind>(kind);
    cp.optimizer.learning_rate = r.f64();
    cp.optimizer.beta1 = r.f64();
    cp.optimizer.beta2 = r.f64();
    cp.optimizer.epsilon = r.f64();
    cp.optimizer.step = r.u64();
    const std::uint32_t blocks = r.u32();
    for (std::uint32_t b = 0; b < blocks; ++b) {
        if (r.u32() != 1) {
            throw CheckpointError("optimizer block must be one-dimensional");
        }
        const std::uint32_t len = r.u32();
        if (r.u32() != 2ULL * len) {
            throw CheckpointError("optimizer block value count mismatch");
        }
        cp.optimizer.first_moment.push_back(r.f64s(len));
        cp.optimizer.second_moment.push_back(r.f64s(len));
    }
    if (!r.done()) {
        throw CheckpointError("trailing bytes after checkpoint");
    }
    return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Network& network, const OptimizerState& optimizer) {
    const auto bytes = serialize_checkpoint(network, optimizer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CheckpointError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw CheckpointError("failed writing " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CheckpointError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

} // namespace rptsc
