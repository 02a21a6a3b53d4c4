"""Appearance-only multi-object tracker.

No motion model anywhere: no velocity, no IoU in the association cost. A track
is represented purely by a score-weighted running mean of its recent appearance
embeddings, and detections are associated to tracks in two score-banded stages:
confident detections first against every live track, then the leftovers pooled
with low-confidence detections against whatever tracks remain. Low-confidence
detections can keep an existing track alive but never start a new one.
"""

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np

from .assign import FORBIDDEN, gate_costs, solve_assignment
from .core import Detection, FrameInput, TrackerConfig, TrackOutput, normalize_embedding
from .errors import (
    DimensionMismatchError,
    EmptyHistoryError,
    MissingEmbeddingError,
    NonMonotonicFrameError,
    ZeroWeightError,
)

ZERO_WEIGHT_EPS = 1e-12


class TrackState(enum.Enum):
    ACTIVE = "active"
    LOST = "lost"
    REMOVED = "removed"


def weighted_feature(history, tau: int) -> np.ndarray:
    """Score-weighted mean of the most recent min(len(history), tau) embeddings.

    history is a sequence of (embedding, score) pairs, oldest first. Each
    embedding is weighted by its detection score (a confident sighting should
    pull the representation harder than a dubious one), the weighted mean is
    renormalized to unit length.
    """
    if len(history) == 0:
        raise EmptyHistoryError("cannot compute a feature from an empty history")
    recent = list(history)[-tau:]
    embs = np.stack([e for e, _ in recent])
    scores = np.array([s for _, s in recent], dtype=np.float64)
    total = float(scores.sum())
    if total < ZERO_WEIGHT_EPS:
        raise ZeroWeightError(f"history scores sum to {total!r}")
    mean = embs.T @ scores / total
    return normalize_embedding(mean)


def split_by_score(detections, config: TrackerConfig):
    """Partition detections into (high, low, discarded) score bands.

    Boundaries are inclusive on the left: score >= high_thresh is high band,
    low_thresh <= score < high_thresh is low band, the rest is discarded.
    Original order is preserved within each band.
    """
    high, low, discarded = [], [], []
    for det in detections:
        if det.score >= config.high_thresh:
            high.append(det)
        elif det.score >= config.low_thresh:
            low.append(det)
        else:
            discarded.append(det)
    return high, low, discarded


class Track:
    """State of one tracked object.

    Keeps a bounded ring of the last `tau` (embedding, score) observations;
    `feature` is always the score-weighted mean of that ring (see
    weighted_feature). While a track is lost the ring is not touched, so the
    feature stays frozen at its last matched appearance.
    """

    def __init__(self, track_id: int, detection: Detection, frame: int, tau: int):
        self.track_id = track_id
        self.state = TrackState.ACTIVE
        self.class_id = detection.class_id
        self.tau = tau
        self.history: deque = deque(maxlen=tau)
        self.frames_since_match = 0
        self.start_frame = frame
        self.last_frame = frame
        self.last_bbox = detection.bbox
        self.feature: np.ndarray | None = None
        self._observe(detection, frame)

    def _observe(self, detection: Detection, frame: int):
        self.history.append((detection.embedding, detection.score))
        self.feature = weighted_feature(self.history, self.tau)
        self.state = TrackState.ACTIVE
        self.frames_since_match = 0
        self.last_bbox = detection.bbox
        self.last_frame = frame

    def _miss(self, max_lost_age: int):
        self.frames_since_match += 1
        if self.state is TrackState.ACTIVE:
            self.state = TrackState.LOST
        if self.state is TrackState.LOST and self.frames_since_match > max_lost_age:
            self.state = TrackState.REMOVED

    def __repr__(self):
        return (
            f"Track(id={self.track_id}, state={self.state.value}, "
            f"cls={self.class_id}, hist={len(self.history)}, "
            f"since_match={self.frames_since_match})"
        )


def build_cost_matrix(tracks, detections, per_class: bool = False) -> np.ndarray:
    """Appearance cost matrix: entry (i, j) = 1 - cos(track_i, det_j) in [0, 2].

    With per_class, pairs whose class ids differ are FORBIDDEN outright.
    """
    costs = np.empty((len(tracks), len(detections)), dtype=np.float64)
    if costs.size == 0:
        return costs
    for j, det in enumerate(detections):
        if det.embedding is None:
            raise MissingEmbeddingError(det.frame, j)
    feats = np.stack([t.feature for t in tracks])
    embs = np.stack([d.embedding for d in detections])
    sims = np.clip(feats @ embs.T, -1.0, 1.0)
    costs = 1.0 - sims
    if per_class:
        track_cls = np.array([t.class_id for t in tracks]).reshape(-1, 1)
        det_cls = np.array([d.class_id for d in detections]).reshape(1, -1)
        costs = np.where(track_cls != det_cls, FORBIDDEN, costs)
    return costs


@dataclass
class StepStats:
    """Per-frame association tallies, mostly for CLI diagnostics."""

    frame: int
    matched_stage1: int = 0
    matched_stage2: int = 0
    spawned: int = 0
    removed: int = 0


class Tracker:
    """Stateful frame-by-frame tracker; see `step` for the per-frame protocol."""

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.tracks: list[Track] = []
        self._next_id = 1
        self._last_frame: int | None = None
        self.last_stats: StepStats | None = None

    @property
    def live_tracks(self) -> list[Track]:
        return [t for t in self.tracks if t.state is not TrackState.REMOVED]

    def step(self, frame_input: FrameInput) -> list[TrackOutput]:
        """Advance one frame and return the outputs of every matched track.

        Per frame: split detections into score bands; stage 1 assigns
        high-band detections to all live (active or lost) tracks under the
        high similarity gate; stage 2 assigns the pool of leftover high-band
        plus low-band detections to the remaining tracks under the low gate
        (with bytetrack_stage2 the pool is the low band only). Matched tracks
        absorb their detection; unmatched tracks age and eventually drop off;
        unmatched high-band detections above min_init_score found new tracks.
        Low-band detections never found tracks.
        """
        cfg = self.config
        frame = frame_input.frame
        if self._last_frame is not None and frame <= self._last_frame:
            raise NonMonotonicFrameError(
                f"frame {frame} after frame {self._last_frame}"
            )
        self._last_frame = frame
        stats = StepStats(frame=frame)

        for j, det in enumerate(frame_input.detections):
            if det.embedding is None:
                raise MissingEmbeddingError(frame, j)
            if cfg.embedding_dim is not None and det.embedding.shape[0] != cfg.embedding_dim:
                raise DimensionMismatchError(
                    f"frame {frame}: embedding length {det.embedding.shape[0]}, "
                    f"expected {cfg.embedding_dim}"
                )

        high, low, _ = split_by_score(frame_input.detections, cfg)
        live = self.live_tracks

        # Stage 1: confident detections against every live track. Lost tracks
        # compete on equal footing, their feature frozen from the last match.
        res1 = solve_assignment(
            gate_costs(build_cost_matrix(live, high, cfg.per_class),
                       1.0 - cfg.sim_gate_high)
        )
        matched: list[tuple[Track, Detection]] = []
        for ti, dj in res1.matches:
            matched.append((live[ti], high[dj]))
        stats.matched_stage1 = len(res1.matches)

        remaining = [live[i] for i in res1.unmatched_rows]
        unmatched_high = [high[j] for j in res1.unmatched_cols]

        # Stage 2: the leftovers. Pooling the unmatched confident detections
        # with the low band gives them a second chance under the looser gate.
        pool = list(low) if cfg.bytetrack_stage2 else unmatched_high + list(low)
        res2 = solve_assignment(
            gate_costs(build_cost_matrix(remaining, pool, cfg.per_class),
                       1.0 - cfg.sim_gate_low)
        )
        for ti, dj in res2.matches:
            matched.append((remaining[ti], pool[dj]))
        stats.matched_stage2 = len(res2.matches)

        for track, det in matched:
            track._observe(det, frame)

        matched_ids = {t.track_id for t, _ in matched}
        for track in live:
            if track.track_id not in matched_ids:
                track._miss(cfg.max_lost_age)
                if track.state is TrackState.REMOVED:
                    stats.removed += 1

        # Founding: only confident leftovers above the init floor. The low
        # band can sustain tracks but never create them.
        if cfg.bytetrack_stage2:
            leftovers = unmatched_high
        else:
            taken = {dj for _, dj in res2.matches}
            leftovers = [pool[j] for j in range(len(unmatched_high)) if j not in taken]
        new_tracks = []
        for det in leftovers:
            if det.score >= cfg.min_init_score:
                track = Track(self._next_id, det, frame, cfg.tau)
                self._next_id += 1
                self.tracks.append(track)
                new_tracks.append(track)
        stats.spawned = len(new_tracks)

        emitting = sorted(
            [t for t, _ in matched] + new_tracks, key=lambda t: t.track_id
        )
        outputs = []
        for track in emitting:
            emb, score = track.history[-1]
            outputs.append(
                TrackOutput(
                    frame=frame,
                    track_id=track.track_id,
                    bbox=track.last_bbox,
                    score=score,
                    class_id=track.class_id,
                )
            )
        self.last_stats = stats
        return outputs


def run_sequence(frames, config: TrackerConfig | None = None) -> list[TrackOutput]:
    """Track a whole sequence from scratch; outputs sorted by (frame, track_id)."""
    tracker = Tracker(config)
    outputs: list[TrackOutput] = []
    for frame_input in frames:
        outputs.extend(tracker.step(frame_input))
    outputs.sort(key=lambda o: (o.frame, o.track_id))
    return outputs
