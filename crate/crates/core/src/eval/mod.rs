//! Small classifiers and the synthetic protocol used to measure what the
//! augmentation buys.

pub mod evaluate;
pub mod knn;
pub mod loss;
pub mod softmax;
pub mod synth;

pub use evaluate::{compare, evaluate, mean_and_stderr, Classifier, Comparison, EvalConfig};
pub use knn::knn_predict;
pub use loss::{fagc_loss, gate, LossConfig, GATE_THRESHOLD, LAMBDA_GRID};
pub use softmax::{train_softmax, SoftmaxModel, TrainConfig, TrainTrace};
pub use synth::{synth_dataset, synth_split, SynthSpec, SynthTask};
