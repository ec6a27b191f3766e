#ifndef NERFORGE_NERFORGE_HPP
#define NERFORGE_NERFORGE_HPP

#include "nerforge/assemble.hpp"
#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/gazetteer.hpp"
#include "nerforge/io.hpp"
#include "nerforge/label.hpp"
#include "nerforge/metrics.hpp"
#include "nerforge/parallel.hpp"
#include "nerforge/textproc.hpp"
#include "nerforge/unify.hpp"
#include "nerforge/utf8.hpp"
#include "nerforge/wiki_vocab.hpp"

#endif  // NERFORGE_NERFORGE_HPP
