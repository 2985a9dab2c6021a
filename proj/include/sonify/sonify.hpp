#ifndef SONIFY_SONIFY_HPP
#define SONIFY_SONIFY_HPP

#include "sonify/buffer.hpp"
#include "sonify/channels.hpp"
#include "sonify/diagnostics.hpp"
#include "sonify/error.hpp"
#include "sonify/generator/config.hpp"
#include "sonify/generator/envelope.hpp"
#include "sonify/generator/filter.hpp"
#include "sonify/generator/lfo.hpp"
#include "sonify/generator/sampler.hpp"
#include "sonify/generator/spectraliser.hpp"
#include "sonify/generator/synthesiser.hpp"
#include "sonify/generator/waveform.hpp"
#include "sonify/job.hpp"
#include "sonify/parameters.hpp"
#include "sonify/presets.hpp"
#include "sonify/rng.hpp"
#include "sonify/score.hpp"
#include "sonify/sonification.hpp"
#include "sonify/sources.hpp"
#include "sonify/table.hpp"
#include "sonify/wav.hpp"

#endif  // SONIFY_SONIFY_HPP
