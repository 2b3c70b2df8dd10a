from .stream_controller import StreamController
from .turing_controller import TuringController
from .model_controller import ModelController
from .lambda_controller import LambdaController
from .reduction_controller import ReductionController
from .main_controller import MainController
