"""pulsedrive: a desk-scale workbench for pulse-amplitude intrinsic rewards.

Subpackages:
    sim      2D maze driving simulator with raycast ego-view rendering
    physio   synthetic blood-volume-pulse oracle, peak detection, labeling
    nn       minimal sequential NN engine (conv/pool/dense, Adam, gradcheck)
    reward   pulse-amplitude regression CNN: datasets, training, inference
    rl       DQN with blended extrinsic/intrinsic rewards
    harness  experiment orchestration, CSV emission, CLI
    bridge   live-drive WebSocket session service
"""

__version__ = "0.1.0"
