#include "metapac/metapac.h"
