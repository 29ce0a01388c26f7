"""Correlation detector: is the extracted sequence the one we embedded?

The true payload is hidden among 99 random sequences; after each attack the
extracted bits are correlated against all 100 and the best match reported.
"""
from ssimmark import data
from ssimmark.attacks import default_profile
from ssimmark.bench import detect_among_random
from ssimmark.embed import EmbedConfig, embed
from ssimmark.extract import extract_payload, true_payload

asset, mark = data.standard_pair()
w, rep = embed(asset, mark, EmbedConfig(thr1=0.8))
truth = true_payload(mark, rep.key)
print(f"payload: {truth.size} bits")

for i, spec in enumerate(default_profile()):
    bits = extract_payload(spec.apply(w, seed=i), rep.key)
    resp, pos = detect_among_random(bits, truth, n=100, seed=1000 + i)
    others = [s for j, s in enumerate(resp.scores) if j != pos]
    print(
        f"{spec.to_line():40s} true score {resp.scores[pos]:.3f}  "
        f"best random {max(others):+.3f}  argmax {'ok' if resp.argmax == pos else 'MISSED'}"
    )
