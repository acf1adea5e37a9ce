pub mod encode;
pub mod lts;
pub mod pi;
pub mod rtm;
pub mod workbench;
