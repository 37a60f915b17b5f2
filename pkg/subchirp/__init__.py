"""subchirp - Binary Subspace Chirp codebooks, decoders and random-access simulation"""

__version__ = "1.0.0"
__author__ = "guilliotinedreamteam"
__description__ = "Grassmannian line codebooks from binary symplectic geometry with fast multi-user reconstruction"
