"""Seeded synthetic tracking scenarios with exact ground truth.

Identities get well-separated unit appearance vectors (rejection sampling),
move on constant-velocity paths that reflect off the arena walls, and are
observed each frame through optional embedding noise, score dips, dropout,
and Poisson background clutter. Everything is driven by one numpy PCG64
generator, so a ScenarioSpec is a complete, reproducible description:
equal spec in, byte-equal scenario out.
"""

import os
from dataclasses import dataclass

import numpy as np

from .core import BBox, Detection, FrameInput, GtEntry
from .errors import ConfigError, SeparationInfeasibleError
from .io import SequenceBundle, save_text, write_detections, write_embeddings, write_gt

BOX_SIZE = 40.0
BASE_SCORE = 0.95
MAX_SAMPLING_ATTEMPTS = 100_000


@dataclass(frozen=True)
class ScenarioSpec:
    """Complete description of one synthetic scenario.

    score_dips entries are (start_frame, end_frame, identity, dipped_score):
    the identity's detection score drops to dipped_score on frames
    start..end inclusive. dipped_score must sit inside [low_thresh,
    high_thresh), i.e. in the tracker's low band. dropout_windows entries are
    (start_frame, end_frame, identity): the identity goes completely
    undetected on those frames (ground truth still records it).
    """

    num_identities: int = 5
    num_frames: int = 100
    embedding_dim: int = 16
    embed_noise_sigma: float = 0.0
    min_identity_separation: float = 0.8
    dropout_prob: float = 0.0
    score_dips: tuple = ()
    dropout_windows: tuple = ()
    clutter_rate: float = 0.0
    arena: tuple[float, float] = (1280.0, 720.0)
    low_thresh: float = 0.3
    high_thresh: float = 0.84
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "score_dips", tuple(tuple(d) for d in self.score_dips))
        object.__setattr__(
            self, "dropout_windows", tuple(tuple(w) for w in self.dropout_windows)
        )
        if self.num_identities < 0:
            raise ConfigError("num_identities must be >= 0")
        if self.num_frames < 0:
            raise ConfigError("num_frames must be >= 0")
        if self.embedding_dim < 1:
            raise ConfigError("embedding_dim must be >= 1")
        if not (0.0 <= self.dropout_prob <= 1.0):
            raise ConfigError("dropout_prob must be in [0, 1]")
        if not (0.0 <= self.min_identity_separation <= 2.0):
            raise ConfigError("min_identity_separation must be in [0, 2]")
        if self.embed_noise_sigma < 0:
            raise ConfigError("embed_noise_sigma must be >= 0")
        if self.clutter_rate < 0:
            raise ConfigError("clutter_rate must be >= 0")
        if not (0.0 <= self.low_thresh < self.high_thresh <= 1.0):
            raise ConfigError("need 0 <= low_thresh < high_thresh <= 1")
        if self.arena[0] <= BOX_SIZE or self.arena[1] <= BOX_SIZE:
            raise ConfigError(f"arena must exceed the {BOX_SIZE}px box size")
        for dip in self.score_dips:
            start, end, identity, score = dip
            if start > end:
                raise ConfigError(f"dip window {start}..{end} is empty")
            if not (1 <= identity <= self.num_identities):
                raise ConfigError(f"dip identity {identity} out of range")
            if not (self.low_thresh <= score < self.high_thresh):
                raise ConfigError(
                    f"dipped score {score} must lie in the low band "
                    f"[{self.low_thresh}, {self.high_thresh})"
                )
        for win in self.dropout_windows:
            start, end, identity = win
            if start > end:
                raise ConfigError(f"dropout window {start}..{end} is empty")
            if not (1 <= identity <= self.num_identities):
                raise ConfigError(f"dropout identity {identity} out of range")


def _sample_bases(rng, spec) -> np.ndarray:
    """Unit vectors with pairwise cosine similarity <= 1 - min separation."""
    max_sim = 1.0 - spec.min_identity_separation
    bases: list[np.ndarray] = []
    attempts = 0
    while len(bases) < spec.num_identities:
        attempts += 1
        if attempts > MAX_SAMPLING_ATTEMPTS:
            raise SeparationInfeasibleError(
                f"placed {len(bases)} of {spec.num_identities} identities in "
                f"{MAX_SAMPLING_ATTEMPTS} attempts at separation "
                f"{spec.min_identity_separation}"
            )
        cand = rng.normal(size=spec.embedding_dim)
        norm = np.linalg.norm(cand)
        if norm < 1e-9:
            continue
        cand /= norm
        if all(float(np.dot(cand, b)) <= max_sim for b in bases):
            bases.append(cand)
    return np.array(bases).reshape(len(bases), spec.embedding_dim)


def _dipped_score(spec, frame: int, identity: int) -> float:
    for start, end, dip_id, score in spec.score_dips:
        if dip_id == identity and start <= frame <= end:
            return float(score)
    return BASE_SCORE


def _dropped(spec, frame: int, identity: int) -> bool:
    return any(
        win_id == identity and start <= frame <= end
        for start, end, win_id in spec.dropout_windows
    )


def generate(spec: ScenarioSpec) -> SequenceBundle:
    """Generate the scenario described by `spec`.

    Deterministic: one PCG64 stream seeded with spec.seed drives base
    sampling, motion, dropout, noise and clutter in a fixed order.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    bases = _sample_bases(rng, spec)

    width, height = spec.arena
    # Top-left corners stay inside [0, arena - box]; velocity reflects there.
    max_x, max_y = width - BOX_SIZE, height - BOX_SIZE
    pos = rng.uniform((0.0, 0.0), (max_x, max_y), size=(spec.num_identities, 2))
    vel = rng.uniform(-4.0, 4.0, size=(spec.num_identities, 2))

    frames = []
    gt = []
    for frame in range(1, spec.num_frames + 1):
        dets = []
        for i in range(spec.num_identities):
            identity = i + 1
            bbox = BBox(float(pos[i, 0]), float(pos[i, 1]), BOX_SIZE, BOX_SIZE)
            gt.append(GtEntry(frame=frame, identity=identity, bbox=bbox, class_id=0))
            observed = not _dropped(spec, frame, identity)
            if spec.dropout_prob > 0.0 and rng.random() < spec.dropout_prob:
                observed = False
            if not observed:
                continue
            if spec.embed_noise_sigma > 0.0:
                emb = bases[i] + rng.normal(0.0, spec.embed_noise_sigma,
                                            size=spec.embedding_dim)
                emb /= np.linalg.norm(emb)
            else:
                emb = bases[i].copy()
            dets.append(Detection(
                frame=frame,
                bbox=bbox,
                score=_dipped_score(spec, frame, identity),
                class_id=0,
                embedding=emb,
            ))
        if spec.clutter_rate > 0.0:
            for _ in range(int(rng.poisson(spec.clutter_rate))):
                cx = float(rng.uniform(0.0, max_x))
                cy = float(rng.uniform(0.0, max_y))
                cemb = rng.normal(size=spec.embedding_dim)
                cemb /= np.linalg.norm(cemb)
                cscore = float(rng.uniform(spec.low_thresh, spec.high_thresh))
                dets.append(Detection(
                    frame=frame,
                    bbox=BBox(cx, cy, BOX_SIZE, BOX_SIZE),
                    score=cscore,
                    class_id=0,
                    embedding=cemb,
                ))
        frames.append(FrameInput(frame=frame, detections=tuple(dets)))

        # Advance and reflect; velocity flips at whichever wall was crossed.
        pos += vel
        for i in range(spec.num_identities):
            for axis, limit in ((0, max_x), (1, max_y)):
                while pos[i, axis] < 0.0 or pos[i, axis] > limit:
                    if pos[i, axis] < 0.0:
                        pos[i, axis] = -pos[i, axis]
                    else:
                        pos[i, axis] = 2.0 * limit - pos[i, axis]
                    vel[i, axis] = -vel[i, axis]

    return SequenceBundle(
        name=f"synth-{spec.seed}",
        frames=tuple(frames),
        gt=tuple(gt),
    )


def export(bundle: SequenceBundle, out_dir) -> dict[str, str]:
    """Write det.txt / emb.txt / gt.txt under out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    dets = [d for fi in bundle.frames for d in fi.detections]
    paths = {
        "det": save_text(os.path.join(out_dir, "det.txt"), write_detections(dets)),
        "emb": save_text(os.path.join(out_dir, "emb.txt"), write_embeddings(bundle.frames)),
    }
    if bundle.gt is not None:
        paths["gt"] = save_text(os.path.join(out_dir, "gt.txt"), write_gt(bundle.gt))
    return paths
